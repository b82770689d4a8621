#include "plap/cutoff.hpp"

#include <cmath>
#include <functional>

#include "plap/error.hpp"

namespace plap {
namespace {

// Maximizes g on [lo, hi] by golden-section search; g unimodal near the peak.
double golden_max(const std::function<double(double)>& g, double lo, double hi) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return std::max({gc, gd, g(lo), g(hi)});
}

double sampled_max(const std::function<double(double)>& g, int samples) {
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i <= samples; ++i) {
    const double v = g(1.0 + static_cast<double>(i) / samples);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = 1.0 + static_cast<double>(std::max(0, best_i - 1)) / samples;
  const double hi = 1.0 + static_cast<double>(std::min(samples, best_i + 1)) / samples;
  return std::max(best, golden_max(g, lo, hi));
}

}  // namespace

CutoffField::CutoffField(double R, double delta) : R_(R), delta_(delta) {
  if (!(R > 0.0) || !std::isfinite(R)) {
    fail(ErrorCode::DomainError, "cutoff radius R must be finite and > 0");
  }
  if (!(delta > 0.0) || !(delta < 0.5)) {
    fail(ErrorCode::DomainError, "cutoff exponent delta must lie in (0, 1/2)");
  }
  constexpr int kSamples = 20000;
  // Ratios depend on t = r/R only.
  C_grad_ = sampled_max([this](double t) { return gradient_ratio(t * R_); }, kSamples);
  C_hess_ = sampled_max([this](double t) { return hessian_ratio(t * R_); }, kSamples);
  // Slack so that the bound also holds at the maximizing sample itself.
  C_ = std::max(C_grad_, C_hess_) * (1.0 + 1e-9);
}

double CutoffField::psi(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double s = t - 1.0;
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double CutoffField::dpsi(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double s = t - 1.0;
  return -30.0 * s * s * (1.0 - s) * (1.0 - s);
}

double CutoffField::d2psi(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double s = t - 1.0;
  return -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
}

double CutoffField::value(double r) const { return std::pow(psi(r / R_), 1.0 / delta_); }

double CutoffField::radial_derivative(double r) const {
  const double t = r / R_;
  const double k = 1.0 / delta_;
  return k * std::pow(psi(t), k - 1.0) * dpsi(t) / R_;
}

double CutoffField::radial_second_derivative(double r) const {
  const double t = r / R_;
  const double k = 1.0 / delta_;
  const double s = psi(t);
  const double ds = dpsi(t);
  return k * ((k - 1.0) * std::pow(s, k - 2.0) * ds * ds + std::pow(s, k - 1.0) * d2psi(t)) /
         (R_ * R_);
}

Vector CutoffField::gradient(const VectorRef& x) const {
  const double r = x.norm();
  if (r == 0.0) return Vector::Zero(x.size());
  return (radial_derivative(r) / r) * x;
}

Matrix CutoffField::hessian(const VectorRef& x) const {
  const double r = x.norm();
  const Eigen::Index n = x.size();
  if (r <= R_) return Matrix::Zero(n, n);
  const Vector e = x / r;
  const Matrix ee = e * e.transpose();
  return radial_second_derivative(r) * ee +
         (radial_derivative(r) / r) * (Matrix::Identity(n, n) - ee);
}

double CutoffField::hessian_norm(double r) const {
  if (r <= R_) return 0.0;
  return std::max(std::abs(radial_second_derivative(r)), std::abs(radial_derivative(r)) / r);
}

double CutoffField::gradient_ratio(double r) const {
  const double phi = value(r);
  if (!(phi > 0.0)) return 0.0;
  return R_ * std::abs(radial_derivative(r)) / std::pow(phi, 1.0 - delta_);
}

double CutoffField::hessian_ratio(double r) const {
  const double phi = value(r);
  if (!(phi > 0.0)) return 0.0;
  return R_ * R_ * hessian_norm(r) / std::pow(phi, 1.0 - 2.0 * delta_);
}

CutoffField build_cutoff(double R, double delta) { return CutoffField(R, delta); }

}  // namespace plap
