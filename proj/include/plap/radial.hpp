#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "plap/field.hpp"
#include "plap/params.hpp"

namespace plap {

enum class Termination { ReachedRMax, UHitZero, StepFailure };

std::string_view to_string(Termination t);

/// Regular radial profile of the critical equation from u(0) = u0, u'(0) = 0.
struct RadialSolution {
  Params params;
  double u0 = 0.0;
  double tol = 0.0;
  std::vector<double> r;     ///< r[0] = 0
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> flux;  ///< w = r^{n-1} |u'|^{p-2} u'
  std::vector<double> d2u;   ///< u'' from the equation at the nodes (r > 0)
  Termination termination = Termination::ReachedRMax;
  double r_zero = 0.0;       ///< r* when termination == UHitZero
  int rejected_steps = 0;

  double r_max() const { return r.empty() ? 0.0 : r.back(); }
};

struct RadialOptions {
  int max_steps = 200000;
  /// Relative size of the leading series correction at the start radius.
  double series_size = 1e-7;
  /// Largest step in ln r, which keeps the dense interpolant accurate.
  double max_log_step = 0.05;
};

/// Integrates (r^{n-1}|u'|^{p-2}u')' = -r^{n-1} u^{p*-1} in t = ln r with an
/// adaptive Dormand-Prince 5(4) pair, starting from the small-r series.
/// tol in (1e-12, 1e-4); throws InvalidInput otherwise and StepFailure when
/// the step budget is exhausted.
RadialSolution solve_radial(const Params& params, double u0, double r_max, double tol,
                            const RadialOptions& options = {});

/// Natural length scale u0^{-p/(n-p)} of the solution started at u0.
double radial_length_scale(const Params& params, double u0);

/// lim u r^{(n-p)/(p-1)} extrapolated from r_max, r_max/2, r_max/4, r_max/8.
double tail_constant(const RadialSolution& sol);

struct ShootResult {
  double u0 = 0.0;
  RadialSolution solution;
  int iterations = 0;
};

struct ShootOptions {
  double rel_tol = 1e-9;
  int max_iterations = 100;
  double ode_tol = 1e-11;
  /// Integration length in units of the natural length scale.
  double reach = 200.0;
};

/// Finds u0 whose profile has lim u r^{(n-p)/(p-1)} = target_decay_const.
/// Throws InvalidInput for target <= 0 and NoConvergence if the secant/bisection
/// iteration stalls.
ShootResult shoot_for_bubble(const Params& params, double target_decay_const,
                             const ShootOptions& options = {});

/// Interpolated radial field; throws InterpolationDomain beyond r_max.
/// The solution must have terminated at r_max.
std::shared_ptr<RadialProfileField> as_field(const RadialSolution& sol, const Vector& center);

/// Radial jet of the interpolant at r (quintic Hermite between nodes, series
/// on the first interval).
RadialJet<double> interpolate(const RadialSolution& sol, double r);

}  // namespace plap
