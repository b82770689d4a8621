#include "plap/operators.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "plap/error.hpp"

namespace plap {
namespace {

double checked_grad_norm(const Vector& g, double floor, const VectorRef& x) {
  const double s = g.norm();
  if (!std::isfinite(s)) {
    fail(ErrorCode::NonFinite, "gradient is not finite");
  }
  if (s <= floor) {
    std::ostringstream os;
    os << "|grad u| = " << s << " <= floor " << floor << " at x = " << x.transpose();
    fail(ErrorCode::CriticalPoint, os.str());
  }
  return s;
}

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) {
    fail(ErrorCode::NonFinite, what);
  }
  return v;
}

}  // namespace

double gradient_floor(const ScalarField& field, const OperatorOptions& options) {
  return options.grad_floor * field.gradient_scale();
}

double p_laplacian(const ScalarField& field, const VectorRef& x, const Params& params,
                   const OperatorOptions& options) {
  const Vector g = field.gradient(x);
  const double s = checked_grad_norm(g, gradient_floor(field, options), x);
  const Matrix H = field.hessian(x);
  const double p = params.p;
  const double q = g.dot(H * g) / (s * s);
  return finite_or_throw(std::pow(s, p - 2.0) * (H.trace() + (p - 2.0) * q),
                         "p-Laplacian overflowed");
}

OperatorSample residual(const ScalarField& field, const VectorRef& x, const Params& params,
                        const OperatorOptions& options) {
  OperatorSample sample;
  sample.point = x;
  sample.value = field.value(x);
  if (!(sample.value > 0.0)) {
    fail(ErrorCode::NonPositive, "field value must be positive for the source term");
  }
  sample.p_laplacian = p_laplacian(field, x, params, options);
  sample.grad_norm = field.gradient(x).norm();
  sample.residual = sample.p_laplacian + std::pow(sample.value, params.source_exponent());
  return sample;
}

double linearized_P(const Vector& grad_f, const MatrixRef& hess_w, const Params& params) {
  const double s = grad_f.norm();
  const double p = params.p;
  return std::pow(s, p - 2.0) * hess_w.trace() +
         (p - 2.0) * std::pow(s, p - 4.0) * grad_f.dot(hess_w * grad_f);
}

double linearized_P(const ScalarField& f, const ScalarField& w, const VectorRef& x,
                    const Params& params, const OperatorOptions& options) {
  const Vector g = f.gradient(x);
  checked_grad_norm(g, gradient_floor(f, options), x);
  return finite_or_throw(linearized_P(g, w.hessian(x), params), "linearized operator overflowed");
}

BochnerTerms bochner_terms(const ScalarField& f, const VectorRef& x, const Params& params,
                           const OperatorOptions& options) {
  const Vector g = f.gradient(x);
  const double s = checked_grad_norm(g, gradient_floor(f, options), x);
  const Matrix H = f.hessian(x);
  double h = options.third_step;
  if (h <= 0.0) {
    h = f.has_analytic_hessian()
            ? std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, x.norm())
            : 1e-3 * std::max(1.0, x.norm());
  }
  const std::vector<Matrix> T = fd_third(f, x, h);  // T[k](i, j) = d_k H_ij

  const int n = params.n;
  const double p = params.p;
  const Eigen::Index dim = g.size();
  const Vector Hg = H * g;
  const double Q = g.dot(Hg);
  const double lap = H.trace();

  // T contracted with g in its derivative slot: (T g)(i, j) = sum_k d_k H_ij g_k.
  Matrix Tg = Matrix::Zero(dim, dim);
  Vector grad_lap(dim);
  Vector grad_Q(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    Tg += g(k) * T[static_cast<std::size_t>(k)];
    grad_lap(k) = T[static_cast<std::size_t>(k)].trace();
    grad_Q(k) = g.dot(T[static_cast<std::size_t>(k)] * g);
  }
  grad_Q += 2.0 * H * Hg;

  // Hessian of w = |grad f|^p.
  const Matrix hess_w = p * (p - 2.0) * std::pow(s, p - 4.0) * Hg * Hg.transpose() +
                        p * std::pow(s, p - 2.0) * (Tg + H * H);
  BochnerTerms terms;
  terms.lhs = linearized_P(g, 0.5 * (hess_w + hess_w.transpose()), params) / p;

  const double dp = std::pow(s, p - 2.0) * lap + (p - 2.0) * std::pow(s, p - 4.0) * Q;
  const Vector grad_dp = (p - 2.0) * std::pow(s, p - 4.0) * lap * Hg +
                         std::pow(s, p - 2.0) * grad_lap +
                         (p - 2.0) * ((p - 4.0) * std::pow(s, p - 6.0) * Q * Hg +
                                      std::pow(s, p - 4.0) * grad_Q);
  const double sharp = dp / n - (p - 1.0) * std::pow(s, p - 4.0) * Q;
  terms.rhs = dp * dp / n + (static_cast<double>(n) / (n - 1.0)) * sharp * sharp +
              std::pow(s, p - 2.0) * (g.dot(grad_dp) - (p - 2.0) * dp * Q / (s * s));
  finite_or_throw(terms.lhs, "Bochner left-hand side overflowed");
  finite_or_throw(terms.rhs, "Bochner right-hand side overflowed");
  return terms;
}

double bochner_gap(const ScalarField& f, const VectorRef& x, const Params& params,
                   const OperatorOptions& options) {
  return bochner_terms(f, x, params, options).gap();
}

}  // namespace plap
