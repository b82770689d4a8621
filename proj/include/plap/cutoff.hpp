#pragma once

#include "plap/types.hpp"

namespace plap {

/// Radial cutoff phi(x) = psi(|x|/R)^{1/delta} with psi the quintic smoothstep
/// falling from 1 on [0, 1] to 0 on [2, inf).
///
/// Satisfies |grad phi| <= (C/R) phi^{1-delta} and |D2 phi| <= (C/R^2) phi^{1-2 delta}
/// with the reported constant C (operator norm for the Hessian).
class CutoffField {
 public:
  /// 0 < delta < 1/2, R > 0. Throws DomainError otherwise.
  CutoffField(double R, double delta);

  double R() const { return R_; }
  double delta() const { return delta_; }
  /// Empirical bound constant; max of the two normalized ratios over [R, 2R].
  double C() const { return C_; }
  double C_gradient() const { return C_grad_; }
  double C_hessian() const { return C_hess_; }

  /// Profile psi and its derivatives in t = r/R.
  static double psi(double t);
  static double dpsi(double t);
  static double d2psi(double t);

  /// phi, phi', phi'' as functions of r.
  double value(double r) const;
  double radial_derivative(double r) const;
  double radial_second_derivative(double r) const;

  double value(const VectorRef& x) const { return value(x.norm()); }
  Vector gradient(const VectorRef& x) const;
  Matrix hessian(const VectorRef& x) const;
  /// Operator norm of the Hessian at radius r: max(|phi''|, |phi'|/r).
  double hessian_norm(double r) const;

  /// R |phi'| / phi^{1-delta} at radius r; 0 where phi = 0.
  double gradient_ratio(double r) const;
  /// R^2 |D2 phi| / phi^{1-2 delta} at radius r; 0 where phi = 0.
  double hessian_ratio(double r) const;

 private:
  double R_;
  double delta_;
  double C_grad_ = 0.0;
  double C_hess_ = 0.0;
  double C_ = 0.0;
};

/// Builds the cutoff and its bound constant from a dense radial sample refined
/// by golden-section search around the sampled maxima.
CutoffField build_cutoff(double R, double delta);

}  // namespace plap
