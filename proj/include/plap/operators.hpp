#pragma once

#include "plap/field.hpp"
#include "plap/params.hpp"

namespace plap {

struct OperatorOptions {
  /// Relative critical-point floor; multiplied by field.gradient_scale().
  double grad_floor = 1e-10;
  /// Step for the third-derivative differences in bochner_gap; 0 selects
  /// eps^{1/3} * max(1, |x|).
  double third_step = 0.0;
};

struct OperatorSample {
  Vector point;
  double value = 0.0;
  double grad_norm = 0.0;
  double p_laplacian = 0.0;
  double residual = 0.0;  ///< p_laplacian + value^{p*-1}
};

/// Absolute gradient floor for a field.
double gradient_floor(const ScalarField& field, const OperatorOptions& options);

/// div(|grad u|^{p-2} grad u) in expanded form
/// |grad u|^{p-2} (Lap u + (p-2) D2u(grad u, grad u) / |grad u|^2).
///
/// Throws CriticalPoint when |grad u(x)| is at or below the floor and
/// NonFinite if the result overflows.
double p_laplacian(const ScalarField& field, const VectorRef& x, const Params& params,
                   const OperatorOptions& options = {});

/// Pointwise residual of the critical equation.
OperatorSample residual(const ScalarField& field, const VectorRef& x, const Params& params,
                        const OperatorOptions& options = {});

/// Second-order part of the linearized p-Laplacian at f applied to w:
/// |grad f|^{p-2} Lap w + (p-2) |grad f|^{p-4} D2w(grad f, grad f).
double linearized_P(const ScalarField& f, const ScalarField& w, const VectorRef& x,
                    const Params& params, const OperatorOptions& options = {});

/// Same operator with the Hessian of w supplied directly.
double linearized_P(const Vector& grad_f, const MatrixRef& hess_w, const Params& params);

/// Both sides of the p-Bochner inequality at x.
struct BochnerTerms {
  double lhs = 0.0;  ///< (1/p) P_f(|grad f|^p)
  double rhs = 0.0;  ///< sum of the three lower-bound terms
  double gap() const { return lhs - rhs; }
};

BochnerTerms bochner_terms(const ScalarField& f, const VectorRef& x, const Params& params,
                           const OperatorOptions& options = {});

/// lhs - rhs of the p-Bochner inequality; nonnegative for smooth f in flat space.
double bochner_gap(const ScalarField& f, const VectorRef& x, const Params& params,
                   const OperatorOptions& options = {});

}  // namespace plap
