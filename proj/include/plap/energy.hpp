#pragma once

#include <span>
#include <vector>

#include "plap/field.hpp"
#include "plap/params.hpp"
#include "plap/quadrature.hpp"

namespace plap {

/// Energy on the annulus A_R = B_{2R} \ B_R.
struct AnnulusEnergy {
  double R = 0.0;
  double kinetic = 0.0;    ///< (1/p) int |grad u|^p
  double potential = 0.0;  ///< (1/p*) int u^{p*}
  double total = 0.0;
};

enum class EnergyPart { Kinetic, Potential, Total };

struct GrowthFit {
  double exponent = 0.0;  ///< slope of log E against log R
  double stderr_ = 0.0;
  double R_min = 0.0;
  double R_max = 0.0;
  int samples = 0;
};

struct EnergyOptions {
  double rel_tol = 1e-11;
  int max_intervals = 4000;
  /// Inner radius guard for ball integrals, relative to R.
  double r_min_fraction = 1e-9;
};

/// Piecewise exponent of the weighted energy bound for t < -1:
/// -t(n-p)/p if t + p > 0, else -(t+1)(n-p)/(p-1). Throws DomainError for t >= -1.
double weighted_energy_beta(const Params& params, double t);

struct WeightedEnergyParams {
  double t = 0.0;
  double beta = 0.0;
  static WeightedEnergyParams make(const Params& params, double t);
};

/// Kinetic and potential energy of a radial field on A_R.
AnnulusEnergy annulus_energy(const ScalarField& field, double R, const Params& params,
                             const EnergyOptions& options = {});

/// Log-spaced radii from R_min to R_max inclusive, per_decade points per decade.
std::vector<double> log_radii(double R_min, double R_max, int per_decade = 16);

/// Least-squares slope of log(energy part) against log R. Needs >= 4 radii;
/// throws DegenerateFit if any selected energy is <= 0.
GrowthFit growth_fit(std::span<const AnnulusEnergy> table, EnergyPart which);
GrowthFit growth_fit(const ScalarField& field, std::span<const double> radii, const Params& params,
                     EnergyPart which, const EnergyOptions& options = {});

/// int_{B_R} u^{(np + t(n-p))/(n-p)} + int_{B_R} u^t |grad u|^p for t < -1.
double weighted_energy(const ScalarField& field, double t, double R, const Params& params,
                       const EnergyOptions& options = {});

/// Ball integrals behind the kinetic/potential equivalence lemmas, with the
/// smallest constants making each inequality hold at this R.
struct EquivalenceReport {
  double R = 0.0;
  double kin_ball = 0.0;      ///< int_{B_R} |grad u|^p
  double pot_ball = 0.0;      ///< int_{B_R} u^{p*}
  double kin_ball_2R = 0.0;   ///< int_{B_2R} |grad u|^p
  double pot_ball_2R = 0.0;   ///< int_{B_2R} u^{p*}
  double bound_rhs_l28 = 0.0; ///< P + P^{(n-p)/n},  P = pot_ball_2R
  double bound_rhs_l29 = 0.0; ///< K + K^{n(p-1)/(n(p-1)+p)},  K = kin_ball_2R
  double min_C_l28 = 0.0;     ///< kin_ball / bound_rhs_l28
  double min_C_l29 = 0.0;     ///< pot_ball / bound_rhs_l29
  bool holds_l28 = false;     ///< against the caller-supplied constant
  bool holds_l29 = false;
};

EquivalenceReport equivalence_check(const ScalarField& field, double R, const Params& params,
                                    double C = 1.0, const EnergyOptions& options = {});

}  // namespace plap
