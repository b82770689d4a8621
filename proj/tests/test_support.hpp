#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "plap/bubble.hpp"
#include "plap/field.hpp"
#include "plap/types.hpp"

namespace plap::testing {

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

/// Uniform point in the ball of radius R about center.
inline Vector random_in_ball(std::mt19937_64& rng, const Vector& center, double R) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  Vector dir(center.size());
  for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = gauss(rng);
  dir.normalize();
  const double r = R * std::pow(unif(rng), 1.0 / static_cast<double>(center.size()));
  return center + r * dir;
}

/// Point at a given radius in a random direction.
inline Vector random_on_sphere(std::mt19937_64& rng, const Vector& center, double r) {
  std::normal_distribution<double> gauss;
  Vector dir(center.size());
  for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = gauss(rng);
  return center + r * dir.normalized();
}

/// Full cubic polynomial c + b.x + x^T A x / 2 + sum_ijk C_ijk x_i x_j x_k / 6
/// with symmetric A and C, analytic derivatives up to order two.
class CubicField final : public ScalarField {
 public:
  CubicField(std::mt19937_64& rng, int n, double scale = 0.5) : n_(n), A_(n, n), C_(n * n * n) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    c_ = 3.0;
    b_ = Vector(n);
    for (int i = 0; i < n; ++i) b_(i) = unif(rng);
    Matrix A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = scale * unif(rng);
    A_ = 0.5 * (A + A.transpose());
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) {
          const double v = 0.5 * scale * unif(rng);
          const int perms[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
          for (const auto& q : perms) C_[idx(q[0], q[1], q[2])] = v;
        }
  }

  int dimension() const override { return n_; }
  double value(const VectorRef& x) const override {
    double cubic = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) cubic += C_[idx(i, j, k)] * x(i) * x(j) * x(k);
    return c_ + b_.dot(x) + 0.5 * x.dot(A_ * x) + cubic / 6.0;
  }
  Vector gradient(const VectorRef& x) const override {
    Vector g = b_ + A_ * x;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) g(i) += 0.5 * C_[idx(i, j, k)] * x(j) * x(k);
    return g;
  }
  Matrix hessian(const VectorRef& x) const override {
    Matrix H = A_;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) H(i, j) += C_[idx(i, j, k)] * x(k);
    return H;
  }
  bool has_analytic_gradient() const override { return true; }
  bool has_analytic_hessian() const override { return true; }

 private:
  int idx(int i, int j, int k) const { return (i * n_ + j) * n_ + k; }
  int n_;
  double c_ = 0.0;
  Vector b_;
  Matrix A_;
  std::vector<double> C_;
};

/// Sum of random plane waves sum_k c_k sin(w_k.x + phi_k) plus a linear term,
/// with analytic derivatives up to order two.
class WaveField final : public ScalarField {
 public:
  WaveField(std::mt19937_64& rng, int n, int waves = 3) : n_(n) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    b_ = Vector(n);
    for (int i = 0; i < n; ++i) b_(i) = unif(rng);
    for (int k = 0; k < waves; ++k) {
      Vector w(n);
      for (int i = 0; i < n; ++i) w(i) = unif(rng);
      w_.push_back(w);
      c_.push_back(0.5 * unif(rng));
      phi_.push_back(3.0 * unif(rng));
    }
  }

  int dimension() const override { return n_; }
  double value(const VectorRef& x) const override {
    double v = 2.0 + b_.dot(x);
    for (std::size_t k = 0; k < w_.size(); ++k) v += c_[k] * std::sin(w_[k].dot(x) + phi_[k]);
    return v;
  }
  Vector gradient(const VectorRef& x) const override {
    Vector g = b_;
    for (std::size_t k = 0; k < w_.size(); ++k) g += c_[k] * std::cos(w_[k].dot(x) + phi_[k]) * w_[k];
    return g;
  }
  Matrix hessian(const VectorRef& x) const override {
    Matrix H = Matrix::Zero(n_, n_);
    for (std::size_t k = 0; k < w_.size(); ++k) {
      H -= c_[k] * std::sin(w_[k].dot(x) + phi_[k]) * w_[k] * w_[k].transpose();
    }
    return H;
  }
  bool has_analytic_gradient() const override { return true; }
  bool has_analytic_hessian() const override { return true; }

 private:
  int n_;
  Vector b_;
  std::vector<Vector> w_;
  std::vector<double> c_;
  std::vector<double> phi_;
};

/// Radial field U(r) (1 + eps sin r) built on a bubble profile.
inline std::shared_ptr<RadialProfileField> perturbed_bubble(const Params& params, double lambda,
                                                            double eps, const Vector& center) {
  const int n = params.n;
  const double p = params.p;
  return std::make_shared<RadialProfileField>(
      center,
      [=](double r) {
        const RadialJet<double> b = bubble_jet<double>(n, p, lambda, r);
        const double s = 1.0 + eps * std::sin(r);
        const double ds = eps * std::cos(r);
        const double d2s = -eps * std::sin(r);
        return RadialJet<double>{b.f * s, b.df * s + b.f * ds, b.d2f * s + 2.0 * b.df * ds + b.f * d2s};
      },
      Bubble::centered(params, lambda).gradient_scale());
}

}  // namespace plap::testing
