#pragma once

namespace plap {

/// Problem context for the critical equation  Delta_p u + u^{p*-1} = 0  on R^n.
///
/// Construct through Params::make, which enforces n >= 2 and 1 < p < n.
struct Params {
  int n = 0;
  double p = 0.0;
  double p_star = 0.0;  ///< np/(n-p)
  double decay = 0.0;   ///< (n-p)/(p-1), decay rate of finite-energy solutions

  static Params make(int n, double p);

  /// Source exponent p* - 1.
  double source_exponent() const { return p_star - 1.0; }
  /// p/(p-1), the power of |x - x0| inside the bubble denominator.
  double conjugate() const { return p / (p - 1.0); }
};

}  // namespace plap
