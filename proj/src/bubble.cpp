#include "plap/bubble.hpp"

#include <cmath>
#include <numeric>

#include "plap/error.hpp"

namespace plap {

Bubble::Bubble(const Params& params, double lambda, Vector center)
    : params_(params), lambda_(lambda), center_(std::move(center)) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
    fail(ErrorCode::InvalidInput, "bubble scale lambda must be finite and > 0");
  }
  if (center_.size() != params_.n || !center_.allFinite()) {
    fail(ErrorCode::InvalidInput, "bubble center must be a finite point of R^n");
  }
  c_np_ = bubble_constant<double>(params_.n, params_.p);
}

Bubble Bubble::centered(const Params& params, double lambda) {
  return Bubble(params, lambda, Vector::Zero(params.n));
}

RadialJet<double> Bubble::jet(double r) const {
  return bubble_jet<double>(params_.n, params_.p, lambda_, r);
}

double Bubble::value(const VectorRef& x) const { return jet((x - center_).norm()).f; }

Vector Bubble::gradient(const VectorRef& x) const {
  const Vector d = x - center_;
  const double r = d.norm();
  if (r == 0.0) {
    return Vector::Zero(d.size());
  }
  return (jet(r).df / r) * d;
}

Matrix Bubble::hessian(const VectorRef& x) const {
  const Vector d = x - center_;
  const double r = d.norm();
  const Eigen::Index n = d.size();
  const auto j = jet(r);
  if (r == 0.0) {
    if (!std::isfinite(j.d2f)) {
      fail(ErrorCode::CenterSingularity, "bubble Hessian is unbounded at the center for p > 2");
    }
    return j.d2f * Matrix::Identity(n, n);
  }
  const Vector e = d / r;
  const Matrix ee = e * e.transpose();
  return j.d2f * ee + (j.df / r) * (Matrix::Identity(n, n) - ee);
}

double Bubble::peak() const { return std::pow(c_np_ / lambda_, (params_.n - params_.p) / params_.p); }

double Bubble::gradient_scale() const { return peak() / lambda_; }

double Bubble::tail_constant() const {
  const double amp = std::pow(lambda_, 1.0 / (params_.p - 1.0)) * c_np_;
  return std::pow(amp, (params_.n - params_.p) / params_.p);
}

double Bubble::gradient_ratio_limit() const {
  const double amp = std::pow(lambda_, 1.0 / (params_.p - 1.0)) * c_np_;
  return params_.decay * std::pow(amp, -(params_.p - 1.0) / params_.p);
}

double Bubble::v_field_slope() const {
  const double amp = std::pow(lambda_, 1.0 / (params_.p - 1.0)) * c_np_;
  return -std::pow(params_.decay / amp, params_.p - 1.0);
}

double v_profile(const ScalarField& field, const VectorRef& x, const Params& params) {
  const double u = field.value(x);
  if (!(u > 0.0)) {
    fail(ErrorCode::NonPositive, "v_profile needs a positive field value");
  }
  return std::pow(u, -params.p / (params.n - params.p));
}

AffineFit affine_fit(std::span<const double> s, std::span<const double> y) {
  if (s.size() != y.size() || s.size() < 2) {
    fail(ErrorCode::InvalidInput, "affine fit needs at least two paired samples");
  }
  const double count = static_cast<double>(s.size());
  const double s_mean = std::accumulate(s.begin(), s.end(), 0.0) / count;
  const double y_mean = std::accumulate(y.begin(), y.end(), 0.0) / count;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  double y2 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double ds = s[i] - s_mean;
    const double dy = y[i] - y_mean;
    sxx += ds * ds;
    sxy += ds * dy;
    syy += dy * dy;
    y2 += y[i] * y[i];
  }
  if (!(sxx > 0.0)) {
    fail(ErrorCode::DegenerateFit, "affine fit needs distinct abscissae");
  }
  AffineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * s_mean;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * s[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.relative_residual = y2 > 0.0 ? std::sqrt(ss_res / y2) : 0.0;
  return fit;
}

AffineFit v_profile_fit(const ScalarField& field, const Vector& center,
                        std::span<const double> radii, const Params& params) {
  std::vector<double> s;
  std::vector<double> v;
  s.reserve(radii.size());
  v.reserve(radii.size());
  const double m = params.conjugate();
  Vector x = center;
  for (double r : radii) {
    x = center;
    x(0) += r;
    s.push_back(std::pow(r, m));
    v.push_back(v_profile(field, x, params));
  }
  return affine_fit(s, v);
}

}  // namespace plap
