#include "plap/field.hpp"

#include <cmath>
#include <limits>

#include "plap/error.hpp"

namespace plap {

double ScalarField::fd_step(const VectorRef& x) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, x.norm());
}

Vector ScalarField::gradient(const VectorRef& x) const { return fd_gradient(*this, x, fd_step(x)); }

Matrix ScalarField::hessian(const VectorRef& x) const {
  if (has_analytic_gradient()) {
    return fd_hessian_from_gradient(*this, x, fd_step(x));
  }
  // Second differences of values balance truncation and roundoff at eps^{1/4}.
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 0.25) * std::max(1.0, x.norm());
  return fd_hessian(*this, x, h);
}

Vector fd_gradient(const ScalarField& f, const VectorRef& x, double h) {
  const Eigen::Index n = x.size();
  Vector g(n);
  Vector xp = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = xp(i);
    xp(i) = xi + h;
    const double fp = f.value(xp);
    xp(i) = xi - h;
    const double fm = f.value(xp);
    xp(i) = xi;
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix fd_hessian(const ScalarField& f, const VectorRef& x, double h) {
  const Eigen::Index n = x.size();
  Matrix H(n, n);
  Vector y = x;
  const double f0 = f.value(x);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = y(i);
    y(i) = xi + h;
    const double fp = f.value(y);
    y(i) = xi - h;
    const double fm = f.value(y);
    y(i) = xi;
    H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double xj = y(j);
      y(i) = xi + h; y(j) = xj + h;
      const double fpp = f.value(y);
      y(j) = xj - h;
      const double fpm = f.value(y);
      y(i) = xi - h;
      const double fmm = f.value(y);
      y(j) = xj + h;
      const double fmp = f.value(y);
      y(i) = xi; y(j) = xj;
      H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return H;
}

Matrix fd_hessian_from_gradient(const ScalarField& f, const VectorRef& x, double h) {
  const Eigen::Index n = x.size();
  Matrix H(n, n);
  Vector y = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double xj = y(j);
    y(j) = xj + h;
    const Vector gp = f.gradient(y);
    y(j) = xj - h;
    const Vector gm = f.gradient(y);
    y(j) = xj;
    H.col(j) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

std::vector<Matrix> fd_third(const ScalarField& f, const VectorRef& x, double h) {
  const Eigen::Index n = x.size();
  std::vector<Matrix> T;
  T.reserve(static_cast<std::size_t>(n));
  Vector y = x;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double xk = y(k);
    y(k) = xk + h;
    const Matrix Hp = f.hessian(y);
    y(k) = xk - h;
    const Matrix Hm = f.hessian(y);
    y(k) = xk;
    if (!Hp.allFinite() || !Hm.allFinite()) {
      fail(ErrorCode::StencilFailure, "non-finite Hessian inside the third-derivative stencil");
    }
    T.push_back((Hp - Hm) / (2.0 * h));
  }
  return T;
}

FunctionField::FunctionField(int n, ValueFn value, GradientFn gradient, HessianFn hessian)
    : n_(n), value_(std::move(value)), gradient_(std::move(gradient)), hessian_(std::move(hessian)) {
  if (n < 1 || !value_) {
    fail(ErrorCode::InvalidInput, "FunctionField needs n >= 1 and a value callable");
  }
}

Vector FunctionField::gradient(const VectorRef& x) const {
  return gradient_ ? gradient_(x) : ScalarField::gradient(x);
}

Matrix FunctionField::hessian(const VectorRef& x) const {
  return hessian_ ? hessian_(x) : ScalarField::hessian(x);
}

RadialProfileField::RadialProfileField(Vector center, JetFn jet, double gradient_scale)
    : center_(std::move(center)), jet_(std::move(jet)), gradient_scale_(gradient_scale) {
  if (center_.size() < 1 || !center_.allFinite() || !jet_) {
    fail(ErrorCode::InvalidInput, "RadialProfileField needs a finite center and a jet callable");
  }
}

double RadialProfileField::value(const VectorRef& x) const { return jet_((x - center_).norm()).f; }

Vector RadialProfileField::gradient(const VectorRef& x) const {
  const Vector d = x - center_;
  const double r = d.norm();
  if (r == 0.0) {
    return Vector::Zero(d.size());
  }
  return (jet_(r).df / r) * d;
}

Matrix RadialProfileField::hessian(const VectorRef& x) const {
  const Vector d = x - center_;
  const double r = d.norm();
  const Eigen::Index n = d.size();
  const auto j = jet_(r);
  if (r == 0.0) {
    return j.d2f * Matrix::Identity(n, n);
  }
  const Vector e = d / r;
  const Matrix ee = e * e.transpose();
  return j.d2f * ee + (j.df / r) * (Matrix::Identity(n, n) - ee);
}

}  // namespace plap
