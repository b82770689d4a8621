#pragma once

#include "plap/cutoff.hpp"
#include "plap/field.hpp"
#include "plap/operators.hpp"
#include "plap/params.hpp"

namespace plap {

/// Exponents a, b, q of the integral identity behind the key estimate.
struct SerrinZouExponents {
  double a = 0.0;  ///< -n(p-1)/(n-p)
  double b = 0.0;  ///< p(n-1)/(n-p)
  double q = 0.0;  ///< np/(n-p) - 1

  static SerrinZouExponents from(const Params& params);
};

struct TensorSample {
  Vector point;
  Matrix V;
  Matrix V_traceless;
  double ring_norm = 0.0;  ///< Frobenius norm of V_traceless
  double trace = 0.0;
};

/// |grad u|^{p-2} grad u; zero at critical points.
Vector vector_u(const ScalarField& field, const VectorRef& x, const Params& params,
                const OperatorOptions& options = {});

/// u^{-n(p-1)/(n-p)} |grad u|^{p-2} grad u; zero at critical points.
Vector vector_v(const ScalarField& field, const VectorRef& x, const Params& params,
                const OperatorOptions& options = {});

/// Jacobian V_ij = d_j v_i of vector_v with its trace-free part.
///
/// Uses the chain rule when the field has an analytic Hessian, otherwise
/// central differences of vector_v (StencilFailure if the stencil touches a
/// critical point or a non-positive value). V = 0 at critical points.
TensorSample tensor_V(const ScalarField& field, const VectorRef& x, const Params& params,
                      const OperatorOptions& options = {});

struct KeyEstimateOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  /// Inner radius guard as a fraction of the cutoff radius.
  double r_min_fraction = 1e-6;
};

struct KeyEstimateSides {
  double lhs = 0.0;           ///< int u^{(n-1)p/(n-p)} |V_traceless|^2 eta^l
  double rhs_integral = 0.0;  ///< int u^{((2-p)n-p)/(n-p)} |grad u|^{2(p-1)} |grad eta|^2 eta^{l-2}
};

/// Both integrals of the key estimate for a radial field and radial cutoff,
/// reduced to adaptive quadrature in r with the factor |S^{n-1}| r^{n-1}.
/// The multiplicative constant of the estimate is not estimated.
KeyEstimateSides key_estimate_sides(const ScalarField& field, const CutoffField& eta, double l,
                                    const Params& params, const KeyEstimateOptions& options = {});

}  // namespace plap
