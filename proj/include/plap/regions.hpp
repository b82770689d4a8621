#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plap/params.hpp"

namespace plap {

// Closed-form thresholds, templated so they can be evaluated in extended
// precision. Each is only meaningful on the branch that uses it.

/// 2(n-p) / (p(p-2)), p > 2.
template <typename Scalar>
Scalar alpha_hat(Scalar n, Scalar p) {
  return Scalar(2) * (n - p) / (p * (p - Scalar(2)));
}

/// (n-p)^2 / ((p-2)(p-1)), p > 2.
template <typename Scalar>
Scalar alpha_check(Scalar n, Scalar p) {
  return (n - p) * (n - p) / ((p - Scalar(2)) * (p - Scalar(1)));
}

/// (3p-n)(n-p) / (p(n-2p)); +inf or -inf on n = 2p by the sign of the numerator.
template <typename Scalar>
Scalar alpha_bar(Scalar n, Scalar p) {
  const Scalar num = (Scalar(3) * p - n) * (n - p);
  const Scalar den = p * (n - Scalar(2) * p);
  if (den == Scalar(0)) {
    return num > Scalar(0) ? std::numeric_limits<Scalar>::infinity()
                           : -std::numeric_limits<Scalar>::infinity();
  }
  return num / den;
}

/// (3p-n)(n-p) / (p(n-3p+2)).
template <typename Scalar>
Scalar alpha_tilde(Scalar n, Scalar p) {
  const Scalar num = (Scalar(3) * p - n) * (n - p);
  const Scalar den = p * (n - Scalar(3) * p + Scalar(2));
  if (den == Scalar(0)) {
    return num > Scalar(0) ? std::numeric_limits<Scalar>::infinity()
                           : -std::numeric_limits<Scalar>::infinity();
  }
  return num / den;
}

/// (n - 2 + sqrt(n^2 - 4n + 12)) / 2.
template <typename Scalar>
Scalar p_check(Scalar n) {
  using std::sqrt;
  return (n - Scalar(2) + sqrt(n * n - Scalar(4) * n + Scalar(12))) / Scalar(2);
}

struct Thresholds {
  std::optional<double> alpha_hat;    ///< p > 2
  std::optional<double> alpha_check;  ///< p > 2
  std::optional<double> alpha_bar;    ///< n != 2p
  std::optional<double> alpha_tilde;  ///< n != 3p - 2
  double p_check = 0.0;
  /// Decay threshold -(n-p)/p (finite energy for radial solutions).
  double finite_energy_exponent = 0.0;
};

/// Throws DomainError unless 1 < p < n.
Thresholds thresholds(const Params& params);

enum class EnergyCase { I, II, III };

struct EnergyAllowance {
  double exponent = 0.0;
  EnergyCase which = EnergyCase::I;
  /// Case III bounds k strictly; cases I and II allow E = O(R^exponent).
  bool strict = false;
};

/// Allowed annulus-energy growth exponent. Case I for 1 < p <= 2n/(n+1),
/// case II for 2n/(n+1) < p < 2, case III for p > 2 (needs alpha >= 0).
/// Throws DomainError at p = 2 and MissingAlpha for case III without alpha.
EnergyAllowance energy_growth_allowance(const Params& params, std::optional<double> alpha);

enum class CaseId {
  T1_1_i,
  T1_1_ii,
  T1_1_iii,
  T1_2_i,
  T1_2_ii,
  T1_3_i,
  T1_3_ii,
  T1_4_i,
  T1_4_ii,
  T1_4_iii,
  T1_4_iv,
  C1_5,
  C1_6,
  NotCovered,
};

std::string_view to_string(CaseId id);

struct ClassificationQuery {
  int n = 0;
  double p = 0.0;
  std::optional<double> alpha;            ///< u(x) <= C |x|^alpha at infinity
  std::optional<double> energy_exponent;  ///< E_{A_R}(u) = O(R^k)
};

struct CaseHit {
  CaseId id = CaseId::NotCovered;
  std::optional<double> threshold;
  std::optional<double> margin;
  std::string threshold_name;  ///< e.g. "alpha_hat", "energy", empty if unconditional
};

struct ClassificationOutcome {
  bool covered = false;
  CaseId case_id = CaseId::NotCovered;
  std::optional<double> active_threshold;
  std::optional<double> margin;
  std::string threshold_name;
  std::string note;
  /// Every covering case in priority order; the first is the reported one.
  std::vector<CaseHit> all_cases;
};

/// Priority: unconditional cases, then growth-exponent cases, then
/// energy-growth cases, then the corollaries. p = 2 is never covered.
/// Throws DomainError if the query violates 1 < p < n or n < 2.
ClassificationOutcome classify(const ClassificationQuery& query);

/// Which classification cases use alpha-thresholds at (n, p), with their values.
/// Empty for the unconditional ranges and p = 2.
std::vector<CaseHit> alpha_branch_thresholds(int n, double p);

struct RasterCell {
  int n = 0;
  double p = 0.0;
  std::optional<double> alpha;
  ClassificationOutcome outcome;
};

/// Row-major over alpha_grid (outer) then p_grid (inner). Cells with p outside
/// (1, n) are skipped.
std::vector<RasterCell> raster(int n, const std::vector<double>& p_grid,
                               const std::vector<std::optional<double>>& alpha_grid,
                               std::optional<double> energy_exponent = std::nullopt);

}  // namespace plap
