#pragma once

#include <functional>
#include <span>
#include <vector>

namespace plap {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

/// Adaptive 7/15-point Gauss-Kronrod integration on [a, b] with global
/// bisection of the interval carrying the largest error estimate.
///
/// Throws QuadratureFailure when max(abs_tol, rel_tol |I|) is not reached
/// within max_intervals or the integrand is non-finite.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Integral over consecutive panels [breaks[i], breaks[i+1]], each adaptive.
QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  std::span<const double> breaks,
                                  const QuadratureOptions& options = {});

/// Log-spaced breakpoints covering [a, b] with roughly per_decade panels per
/// decade; a > 0.
std::vector<double> log_breaks(double a, double b, int per_decade = 4);

}  // namespace plap
