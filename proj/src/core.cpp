#include <cmath>
#include <numbers>
#include <sstream>

#include "plap/error.hpp"
#include "plap/params.hpp"
#include "plap/types.hpp"

namespace plap {

double unit_sphere_area(int n) {
  const double half = 0.5 * n;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double unit_ball_volume(int n) { return unit_sphere_area(n) / n; }

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CriticalPoint: return "CriticalPoint";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::StencilFailure: return "StencilFailure";
    case ErrorCode::CenterSingularity: return "CenterSingularity";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::MissingAlpha: return "MissingAlpha";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InterpolationDomain: return "InterpolationDomain";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

Params Params::make(int n, double p) {
  if (n < 2) {
    fail(ErrorCode::DomainError, "dimension n must be >= 2, got " + std::to_string(n));
  }
  if (!std::isfinite(p) || !(p > 1.0) || !(p < n)) {
    std::ostringstream os;
    os << "exponent p must satisfy 1 < p < n = " << n << ", got " << p;
    fail(ErrorCode::DomainError, os.str());
  }
  Params params;
  params.n = n;
  params.p = p;
  params.p_star = n * p / (n - p);
  params.decay = (n - p) / (p - 1.0);
  return params;
}

}  // namespace plap
