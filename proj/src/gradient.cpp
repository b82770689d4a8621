#include "plap/gradient.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "plap/error.hpp"

namespace plap {

GradEstimateParams GradEstimateParams::make(const Params& params, double epsilon) {
  const double n = params.n;
  const double p = params.p;
  const double upper = (p - 1.0) / (n - p);
  if (!(epsilon > 0.0) || !(epsilon < upper)) {
    std::ostringstream os;
    os << "gradient estimate needs 0 < eps < (p-1)/(n-p) = " << upper << ", got " << epsilon;
    fail(ErrorCode::DomainError, os.str());
  }
  GradEstimateParams g;
  g.epsilon = epsilon;
  g.a = -(p - 1.0) / (n - p) + epsilon;
  g.theta = p / (n - p) + p * epsilon;
  return g;
}

std::vector<Vector> sample_ball(const Vector& center, double R, const BallSample& sample) {
  const Eigen::Index n = center.size();
  std::vector<Vector> dirs;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector e = Vector::Zero(n);
      e(i) = sign;
      dirs.push_back(e);
    }
  }
  for (int k = 0; k < sample.diagonal; ++k) {
    // Diagonal families rotated by a fixed alternating sign pattern.
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = ((i + k) % 2 == 0) ? 1.0 : (k == 0 ? 1.0 : -1.0);
    d.normalize();
    dirs.push_back(d);
    dirs.push_back(-d);
  }
  std::vector<Vector> points;
  points.reserve(1 + dirs.size() * static_cast<std::size_t>(sample.radial));
  points.push_back(center);
  for (int i = 1; i <= sample.radial; ++i) {
    const double r = R * std::sqrt(static_cast<double>(i) / sample.radial);
    for (const auto& d : dirs) points.push_back(center + r * d);
  }
  return points;
}

GradEstimate grad_estimate_ratio(const ScalarField& field, const Vector& x0, double R, double eps,
                                 const Params& params, const BallSample& sample) {
  GradEstimateParams::make(params, eps);
  if (!(R > 0.0)) {
    fail(ErrorCode::InvalidInput, "gradient estimate radius R must be > 0");
  }
  const double n = params.n;
  const double p = params.p;
  const double sup_power = 1.0 / (n - p) + eps;
  const double u_power = (n - 1.0) / (n - p) - eps;

  GradEstimate out;
  for (const auto& x : sample_ball(x0, 2.0 * R, sample)) {
    out.sup_term = std::max(out.sup_term, std::pow(field.value(x), sup_power));
  }
  const double tail = std::pow(R, -eps * params.decay);
  for (const auto& x : sample_ball(x0, R, sample)) {
    const double g = field.gradient(x).norm();
    const double env = (out.sup_term + tail) * std::pow(field.value(x), u_power);
    out.lhs = std::max(out.lhs, g);
    out.envelope = std::max(out.envelope, env);
    if (env > 0.0) out.ratio = std::max(out.ratio, g / env);
  }
  return out;
}

double pointwise_grad_check(const ScalarField& field, double alpha, const VectorRef& x, double eps,
                            const Params& params) {
  GradEstimateParams::make(params, eps);
  const double r = x.norm();
  if (!(r >= 4.0)) {
    fail(ErrorCode::DomainError, "pointwise gradient check needs |x| >= 4");
  }
  const double n = params.n;
  const double p = params.p;
  const double env = (std::pow(r, (1.0 / (n - p) + eps) * alpha) + std::pow(r, -eps * params.decay)) *
                     std::pow(field.value(x), (n - 1.0) / (n - p) - eps);
  return field.gradient(x).norm() / env;
}

LowerBoundEstimate exterior_lower_bound(const ScalarField& field, double rho,
                                        std::span<const double> radii, const Params& params) {
  const int n = params.n;
  LowerBoundEstimate out;
  out.A_est = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    if (r < rho) continue;
    double smallest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      for (double sign : {1.0, -1.0}) {
        Vector x = Vector::Zero(n);
        x(i) = sign * r;
        smallest = std::min(smallest, field.value(x));
      }
    }
    const double scaled = smallest * std::pow(r, params.decay);
    out.radii.push_back(r);
    out.scaled.push_back(scaled);
    if (scaled < out.A_est) {
      out.A_est = scaled;
      out.r_at_min = r;
    }
  }
  if (out.radii.empty()) {
    fail(ErrorCode::InvalidInput, "exterior lower bound needs at least one radius >= rho");
  }
  return out;
}

}  // namespace plap
