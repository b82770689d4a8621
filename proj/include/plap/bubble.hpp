#pragma once

#include <cmath>
#include <limits>
#include <span>

#include "plap/field.hpp"
#include "plap/params.hpp"

namespace plap {

/// Normalization n^{1/p} ((n-p)/(p-1))^{(p-1)/p} of the extremal family.
template <typename Scalar>
Scalar bubble_constant(int n, Scalar p) {
  using std::pow;
  const Scalar nn = static_cast<Scalar>(n);
  return pow(nn, Scalar(1) / p) * pow((nn - p) / (p - Scalar(1)), (p - Scalar(1)) / p);
}

/// Radial jet of the extremal profile
///   U(r) = ( lambda^{1/(p-1)} c / (lambda^{p/(p-1)} + r^{p/(p-1)}) )^{(n-p)/p}.
///
/// Powers of r go through exp/log and are guarded at r = 0. For p > 2 the
/// second derivative is unbounded at the center and d2f is returned as +inf.
template <typename Scalar>
RadialJet<Scalar> bubble_jet(int n, Scalar p, Scalar lambda, Scalar r) {
  using std::exp;
  using std::log;
  using std::pow;
  const Scalar one(1);
  const Scalar m = p / (p - one);
  const Scalar k = (static_cast<Scalar>(n) - p) / p;
  const Scalar amp = pow(lambda, one / (p - one)) * bubble_constant<Scalar>(n, p);
  const Scalar lam_m = pow(lambda, m);

  RadialJet<Scalar> jet;
  if (r <= Scalar(0)) {
    jet.f = pow(amp / lam_m, k);
    jet.df = Scalar(0);
    // Near the center f = f0 - k m f0 r^m / lambda^m + ...
    if (m > Scalar(2)) {
      jet.d2f = Scalar(0);
    } else if (m == Scalar(2)) {
      jet.d2f = -Scalar(2) * k * jet.f / lam_m;
    } else {
      jet.d2f = -std::numeric_limits<Scalar>::infinity();
    }
    return jet;
  }
  const Scalar log_r = log(r);
  const Scalar r_m = exp(m * log_r);
  const Scalar r_m1 = exp((m - one) * log_r);
  const Scalar r_m2 = exp((m - Scalar(2)) * log_r);
  const Scalar denom = lam_m + r_m;
  jet.f = exp(k * (log(amp) - log(denom)));
  const Scalar g = k * m / denom;  // f' = -g f r^{m-1}
  jet.df = -g * jet.f * r_m1;
  jet.d2f = -g * (jet.df * r_m1 + jet.f * (m - one) * r_m2 - jet.f * m * r_m1 * r_m1 / denom);
  return jet;
}

/// One member U_{lambda, x0} of the extremal family over a Params.
///
/// Exposes itself as a ScalarField with analytic derivatives.
class Bubble final : public ScalarField {
 public:
  Bubble(const Params& params, double lambda, Vector center);

  /// Centered at the origin of R^n.
  static Bubble centered(const Params& params, double lambda);

  const Params& params() const { return params_; }
  double lambda() const { return lambda_; }
  const Vector& center() const { return center_; }
  /// n^{1/p} ((n-p)/(p-1))^{(p-1)/p}
  double c_np() const { return c_np_; }

  int dimension() const override { return params_.n; }
  double value(const VectorRef& x) const override;
  Vector gradient(const VectorRef& x) const override;
  /// Throws CenterSingularity at x = center when p > 2.
  Matrix hessian(const VectorRef& x) const override;
  bool has_analytic_gradient() const override { return true; }
  bool has_analytic_hessian() const override { return true; }
  double gradient_scale() const override;
  std::optional<Vector> radial_center() const override { return center_; }

  RadialJet<double> jet(double r) const;

  /// Value at the center, (c / lambda)^{(n-p)/p}.
  double peak() const;
  /// lim_{r->inf} U r^{(n-p)/(p-1)} = (lambda^{1/(p-1)} c)^{(n-p)/p}.
  double tail_constant() const;
  /// lim_{r->inf} |grad U| / U^{(n-1)/(n-p)} = ((n-p)/(p-1)) (lambda^{1/(p-1)} c)^{-(p-1)/p}.
  double gradient_ratio_limit() const;
  /// v = c_v (x - x0) for the field v = U^{-n(p-1)/(n-p)} |grad U|^{p-2} grad U.
  double v_field_slope() const;

 private:
  Params params_;
  double lambda_;
  Vector center_;
  double c_np_;
};

/// U(x)^{-p/(n-p)}; affine in |x - x0|^{p/(p-1)} exactly when U is a bubble.
double v_profile(const ScalarField& field, const VectorRef& x, const Params& params);

/// Least-squares affine fit y = intercept + slope * s.
struct AffineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
  /// Residual RMS divided by the RMS of y.
  double relative_residual = 0.0;
};

AffineFit affine_fit(std::span<const double> s, std::span<const double> y);

/// Affine fit of v_profile against |x - center|^{p/(p-1)} over the given radii,
/// sampled along the first coordinate axis.
AffineFit v_profile_fit(const ScalarField& field, const Vector& center,
                        std::span<const double> radii, const Params& params);

}  // namespace plap
