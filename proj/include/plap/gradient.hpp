#pragma once

#include <span>
#include <vector>

#include "plap/cutoff.hpp"
#include "plap/field.hpp"
#include "plap/params.hpp"

namespace plap {

/// Exponents of the sharp gradient estimate for 0 < eps < (p-1)/(n-p).
struct GradEstimateParams {
  double epsilon = 0.0;
  double a = 0.0;      ///< -(p-1)/(n-p) + eps
  double theta = 0.0;  ///< p/(n-p) + p eps = (a-1)(p-1) + q + a

  /// Throws DomainError when eps is outside (0, (p-1)/(n-p)).
  static GradEstimateParams make(const Params& params, double epsilon);
};

struct GradEstimate {
  double lhs = 0.0;       ///< max |grad u| over the sample of B_R(x0)
  double envelope = 0.0;  ///< max of (S + R^{-eps (n-p)/(p-1)}) u^{(n-1)/(n-p) - eps}
  double ratio = 0.0;     ///< max of |grad u| / envelope pointwise
  double sup_term = 0.0;  ///< S = sup_{B_2R(x0)} u^{1/(n-p) + eps}
};

struct BallSample {
  int radial = 64;
  /// Extra directions beyond the 2n coordinate directions.
  int diagonal = 1;
};

/// Deterministic sample of the closed ball B_R(x0): radii spaced in r^2 and
/// the +-e_i and +-(1,...,1)/sqrt(n) directions, plus the center.
std::vector<Vector> sample_ball(const Vector& center, double R, const BallSample& sample = {});

/// Sharp gradient estimate on B_R(x0). The constant C(n, p, eps) is not
/// asserted; callers track the ratio across R.
GradEstimate grad_estimate_ratio(const ScalarField& field, const Vector& x0, double R, double eps,
                                 const Params& params, const BallSample& sample = {});

/// |grad u(x)| / [(|x|^{(1/(n-p)+eps) alpha} + |x|^{-eps (n-p)/(p-1)}) u(x)^{(n-1)/(n-p)-eps}]
/// for |x| >= 4. Throws DomainError for |x| < 4.
double pointwise_grad_check(const ScalarField& field, double alpha, const VectorRef& x, double eps,
                            const Params& params);

struct LowerBoundEstimate {
  double A_est = 0.0;  ///< min over r of u r^{(n-p)/(p-1)}
  double r_at_min = 0.0;
  std::vector<double> radii;
  std::vector<double> scaled;  ///< u r^{(n-p)/(p-1)} per radius (min over directions)
};

/// Exterior lower-bound constant over radii r >= rho. The field is evaluated
/// on the 2n points r (+-e_i) around the origin and the minimum is taken.
/// p-superharmonicity of the field is the caller's responsibility.
LowerBoundEstimate exterior_lower_bound(const ScalarField& field, double rho,
                                        std::span<const double> radii, const Params& params);

}  // namespace plap
