#include "plap/rigidity.hpp"

#include <cmath>

#include "plap/error.hpp"
#include "plap/quadrature.hpp"

namespace plap {
namespace {

double v_power(const Params& params) { return -params.n * (params.p - 1.0) / (params.n - params.p); }

Vector vector_v_from(double u, const Vector& g, double floor, const Params& params) {
  const double s = g.norm();
  if (s <= floor) return Vector::Zero(g.size());
  return std::pow(u, v_power(params)) * std::pow(s, params.p - 2.0) * g;
}

TensorSample finish(const VectorRef& x, Matrix V) {
  TensorSample t;
  t.point = x;
  const Eigen::Index n = V.rows();
  t.trace = V.trace();
  t.V_traceless = V - (t.trace / static_cast<double>(n)) * Matrix::Identity(n, n);
  t.ring_norm = t.V_traceless.norm();
  t.V = std::move(V);
  return t;
}

}  // namespace

SerrinZouExponents SerrinZouExponents::from(const Params& params) {
  const double n = params.n;
  const double p = params.p;
  return {-n * (p - 1.0) / (n - p), p * (n - 1.0) / (n - p), n * p / (n - p) - 1.0};
}

Vector vector_u(const ScalarField& field, const VectorRef& x, const Params& params,
                const OperatorOptions& options) {
  const Vector g = field.gradient(x);
  const double s = g.norm();
  if (s <= gradient_floor(field, options)) return Vector::Zero(g.size());
  return std::pow(s, params.p - 2.0) * g;
}

Vector vector_v(const ScalarField& field, const VectorRef& x, const Params& params,
                const OperatorOptions& options) {
  const double u = field.value(x);
  if (!(u > 0.0)) {
    fail(ErrorCode::NonPositive, "vector_v needs a positive field value");
  }
  return vector_v_from(u, field.gradient(x), gradient_floor(field, options), params);
}

TensorSample tensor_V(const ScalarField& field, const VectorRef& x, const Params& params,
                      const OperatorOptions& options) {
  const Eigen::Index n = x.size();
  const double floor = gradient_floor(field, options);
  const double u = field.value(x);
  if (!(u > 0.0)) {
    fail(ErrorCode::NonPositive, "tensor_V needs a positive field value");
  }
  const Vector g = field.gradient(x);
  const double s = g.norm();
  if (s <= floor) {
    return finish(x, Matrix::Zero(n, n));
  }
  const double p = params.p;
  const double a = v_power(params);

  if (field.has_analytic_hessian()) {
    const Matrix H = field.hessian(x);
    const double sp2 = std::pow(s, p - 2.0);
    const double ua = std::pow(u, a);
    const Vector Hg = H * g;
    Matrix V = (a * ua / u) * sp2 * g * g.transpose() +
               ua * sp2 * (H + ((p - 2.0) / (s * s)) * g * Hg.transpose());
    return finish(x, std::move(V));
  }

  const double h = ScalarField::fd_step(x);
  Matrix V(n, n);
  Vector y = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double xj = y(j);
    Vector side[2];
    for (int k = 0; k < 2; ++k) {
      y(j) = xj + (k == 0 ? h : -h);
      const double uy = field.value(y);
      const Vector gy = field.gradient(y);
      if (!(uy > 0.0) || gy.norm() <= floor) {
        fail(ErrorCode::StencilFailure, "finite-difference stencil for V touches a critical point");
      }
      side[k] = vector_v_from(uy, gy, floor, params);
    }
    y(j) = xj;
    V.col(j) = (side[0] - side[1]) / (2.0 * h);
  }
  return finish(x, std::move(V));
}

KeyEstimateSides key_estimate_sides(const ScalarField& field, const CutoffField& eta, double l,
                                    const Params& params, const KeyEstimateOptions& options) {
  if (!(l >= 2.0)) {
    fail(ErrorCode::DomainError, "key estimate needs l >= 2");
  }
  const auto center = field.radial_center();
  if (!center) {
    fail(ErrorCode::InvalidInput, "key_estimate_sides needs a radial field with a known center");
  }
  const int n = params.n;
  const double p = params.p;
  const double R = eta.R();
  const double area = unit_sphere_area(n);
  const double weight_lhs = (n - 1.0) * p / (n - p);
  const double weight_rhs = ((2.0 - p) * n - p) / (n - p);

  auto point = [&](double r) {
    Vector x = *center;
    x(0) += r;
    return x;
  };
  // Reference integrand with |V|^2 in place of |V_traceless|^2 sets the
  // absolute scale, so that an identically vanishing lhs converges.
  auto lhs_parts = [&](double r, bool traceless) {
    const Vector x = point(r);
    const TensorSample t = tensor_V(field, x, params);
    const double norm2 = traceless ? t.ring_norm * t.ring_norm : t.V.squaredNorm();
    return std::pow(field.value(x), weight_lhs) * norm2 * std::pow(eta.value(r), l) * area *
           std::pow(r, n - 1);
  };
  auto rhs_integrand = [&](double r) {
    const Vector x = point(r);
    const double deta = eta.radial_derivative(r);
    if (deta == 0.0) return 0.0;
    const double u = field.value(x);
    const double s = field.gradient(x).norm();
    return std::pow(u, weight_rhs) * std::pow(s, 2.0 * (p - 1.0)) * deta * deta *
           std::pow(eta.value(r), l - 2.0) * area * std::pow(r, n - 1);
  };

  const double r_min = options.r_min_fraction * R;
  std::vector<double> breaks = log_breaks(r_min, R, 2);
  breaks.push_back(2.0 * R);

  QuadratureOptions q;
  q.rel_tol = options.rel_tol;
  q.abs_tol = options.abs_tol;
  q.max_intervals = 4000;
  const double reference =
      integrate_panels([&](double r) { return lhs_parts(r, false); }, breaks, q).value;

  QuadratureOptions q_lhs = q;
  q_lhs.abs_tol = std::max(options.abs_tol, options.rel_tol * std::abs(reference));
  KeyEstimateSides sides;
  sides.lhs = integrate_panels([&](double r) { return lhs_parts(r, true); }, breaks, q_lhs).value;
  sides.rhs_integral = integrate(rhs_integrand, R, 2.0 * R, q).value;
  return sides;
}

}  // namespace plap
