#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles/frozen.hpp"
#include "plap/bubble.hpp"
#include "plap/cutoff.hpp"
#include "plap/error.hpp"
#include "plap/rigidity.hpp"
#include "test_support.hpp"

using namespace plap;
using plap::testing::rel_err;

namespace {

// f = exp(-|x|^2/4) h with h = 2 + x1 + x2 x3 / 2 on R^3.
double gauss_value(const VectorRef& x) {
  return std::exp(-x.squaredNorm() / 4.0) * (2.0 + x(0) + x(1) * x(2) / 2.0);
}

Vector gauss_gradient(const VectorRef& x) {
  const double e = std::exp(-x.squaredNorm() / 4.0);
  const double h = 2.0 + x(0) + x(1) * x(2) / 2.0;
  const Vector dh = (Vector(3) << 1.0, x(2) / 2.0, x(1) / 2.0).finished();
  return e * (dh - 0.5 * h * x);
}

Matrix gauss_hessian(const VectorRef& x) {
  const double e = std::exp(-x.squaredNorm() / 4.0);
  const double h = 2.0 + x(0) + x(1) * x(2) / 2.0;
  const Vector dh = (Vector(3) << 1.0, x(2) / 2.0, x(1) / 2.0).finished();
  Matrix d2h = Matrix::Zero(3, 3);
  d2h(1, 2) = d2h(2, 1) = 0.5;
  return e * (d2h - 0.5 * (x * dh.transpose() + dh * x.transpose()) - 0.5 * h * Matrix::Identity(3, 3) +
              0.25 * h * x * x.transpose());
}

}  // namespace

TEST_CASE("Serrin-Zou exponents") {
  for (auto [n, p] : std::vector<std::pair<int, double>>{{3, 1.5}, {4, 2.5}, {7, 3.3}}) {
    const Params params = Params::make(n, p);
    const SerrinZouExponents e = SerrinZouExponents::from(params);
    CHECK(e.a == doctest::Approx(-n * (p - 1.0) / (n - p)).epsilon(1e-15));
    CHECK(e.b == doctest::Approx(p * (n - 1.0) / (n - p)).epsilon(1e-15));
    CHECK(std::abs(e.a + e.b - 1.0) < 1e-14);
    CHECK(std::abs(e.q + 1.0 - params.p_star) < 1e-14);
  }
}

TEST_CASE("vector u") {
  SUBCASE("p = 2 gives the gradient") {
    const Params params = Params::make(4, 2.0);
    const Bubble b = Bubble::centered(params, 1.0);
    const Vector x = Vector::Constant(4, 0.4);
    CHECK((vector_u(b, x, params) - b.gradient(x)).norm() == 0.0);
  }
  SUBCASE("bubble at p = 1.5 on the first axis") {
    const Params params = Params::make(3, 1.5);
    const Bubble b = Bubble::centered(params, 1.0);
    const Vector x = Vector::Unit(3, 0);
    const Vector u = vector_u(b, x, params);
    CHECK(u.norm() == doctest::Approx(std::sqrt(b.gradient(x).norm())).epsilon(1e-14));
    CHECK(u.normalized().dot(-x) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("zero at a critical point") {
    const Params params = Params::make(3, 1.5);
    const Bubble b = Bubble::centered(params, 1.0);
    CHECK(vector_u(b, Vector::Zero(3), params).norm() == 0.0);
    CHECK(vector_v(b, Vector::Zero(3), params).norm() == 0.0);
  }
}

TEST_CASE("vector v of a bubble is c (x - x0) with a single c") {
  std::mt19937_64 rng(77);
  const Params params = Params::make(4, 2.7);
  const Vector x0 = Vector::Constant(4, 0.5);
  const Bubble b(params, 1.4, x0);
  double c_min = 1e300;
  double c_max = -1e300;
  for (int i = 0; i < 100; ++i) {
    const Vector x = plap::testing::random_in_ball(rng, x0, 20.0);
    const Vector v = vector_v(b, x, params);
    const double c = v.dot(x - x0) / (x - x0).squaredNorm();
    CHECK((v - c * (x - x0)).norm() <= 1e-12 * std::abs(c) * (x - x0).norm());
    c_min = std::min(c_min, c);
    c_max = std::max(c_max, c);
  }
  CHECK((c_max - c_min) <= 1e-8 * std::abs(c_min));
  CHECK(rel_err(c_min, b.v_field_slope()) < 1e-12);
}

TEST_CASE("p = 2 specialization of vector v") {
  const Params params = Params::make(5, 2.0);
  const FunctionField f(5, [](const VectorRef& x) { return 1.0 + std::exp(-x.squaredNorm()); },
                        [](const VectorRef& x) { return Vector(-2.0 * std::exp(-x.squaredNorm()) * x); });
  const Vector x = Vector::LinSpaced(5, -0.4, 0.6);
  const Vector expected = std::pow(f.value(x), -5.0 / 3.0) * f.gradient(x);
  CHECK((vector_v(f, x, params) - expected).norm() <= 1e-14 * expected.norm());
}

TEST_CASE("perturbed bubble: fitted c varies") {
  std::mt19937_64 rng(78);
  const Params params = Params::make(3, 2.5);
  const auto f = plap::testing::perturbed_bubble(params, 1.0, 0.01, Vector::Zero(3));
  double c_min = 1e300;
  double c_max = -1e300;
  for (int i = 0; i < 50; ++i) {
    const Vector x = plap::testing::random_in_ball(rng, Vector::Zero(3), 6.0);
    const Vector v = vector_v(*f, x, params);
    const double c = v.dot(x) / x.squaredNorm();
    c_min = std::min(c_min, c);
    c_max = std::max(c_max, c);
  }
  CHECK((c_max - c_min) > 1e-3 * std::abs(c_min));
}

TEST_CASE("tensor V") {
  SUBCASE("bubbles: V is c Id") {
    std::mt19937_64 rng(90);
    for (int n : {3, 4, 5, 6}) {
      for (double p : {1.3, 1.5, 2.5, 3.0}) {
        if (p >= n) continue;
        const Params params = Params::make(n, p);
        const Bubble b(params, 0.8, Vector::Constant(n, 0.1));
        for (int i = 0; i < 25; ++i) {
          const Vector x = plap::testing::random_in_ball(rng, b.center(), 10.0);
          if (b.gradient(x).norm() <= gradient_floor(b, OperatorOptions{})) continue;
          const TensorSample t = tensor_V(b, x, params);
          CHECK(t.ring_norm <= 1e-7 * (std::abs(t.trace) / n + 1.0));
          CHECK(t.ring_norm <= 1e-7 * std::abs(b.v_field_slope()));
          CHECK(rel_err(t.trace / n, b.v_field_slope()) < 1e-10);
          CHECK(std::abs(t.V_traceless.trace()) <= 1e-12 * std::max(1.0, t.V.norm()));
        }
      }
    }
  }
  SUBCASE("analytic chain rule matches the symbolic oracle") {
    const Params params = Params::make(3, 2.5);
    const FunctionField f(3, gauss_value, gauss_gradient, gauss_hessian);
    const Vector x = Eigen::Map<const Vector>(oracle::kTensorX.data(), 3);
    const TensorSample t = tensor_V(f, x, params);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(rel_err(t.V(i, j), oracle::kTensorV[i][j]) < 1e-12);
    CHECK(rel_err(t.ring_norm, oracle::kTensorRing) < 1e-12);
  }
  SUBCASE("finite-difference path matches the symbolic oracle") {
    const Params params = Params::make(3, 2.5);
    const FunctionField f(3, gauss_value, gauss_gradient);
    const Vector x = Eigen::Map<const Vector>(oracle::kTensorX.data(), 3);
    const TensorSample t = tensor_V(f, x, params);
    CHECK(rel_err(t.ring_norm, oracle::kTensorRing) < 1e-6);
  }
  SUBCASE("hand-constructed v = (x2, x1, 0)") {
    // n = 3, p = 2: v = u^{-3} grad u = grad(x1 x2) for u = (2 (5 - x1 x2))^{-1/2}.
    const Params params = Params::make(3, 2.0);
    const FunctionField f(3, [](const VectorRef& x) { return 1.0 / std::sqrt(2.0 * (5.0 - x(0) * x(1))); });
    const Vector x = (Vector(3) << 0.3, -0.2, 0.5).finished();
    const Vector v = vector_v(f, x, params);
    CHECK(v(0) == doctest::Approx(x(1)).epsilon(1e-7));
    CHECK(v(1) == doctest::Approx(x(0)).epsilon(1e-7));
    const TensorSample t = tensor_V(f, x, params);
    Matrix expected = Matrix::Zero(3, 3);
    expected(0, 1) = expected(1, 0) = 1.0;
    // Values only: V comes from differences of a differenced gradient.
    CHECK((t.V - expected).norm() < 1e-4);
    CHECK(t.ring_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
    CHECK(std::abs(t.trace) < 1e-4);
  }
  SUBCASE("zero at a critical point") {
    const Params params = Params::make(3, 1.5);
    const Bubble b = Bubble::centered(params, 1.0);
    const TensorSample t = tensor_V(b, Vector::Zero(3), params);
    CHECK(t.V.norm() == 0.0);
    CHECK(t.ring_norm == 0.0);
  }
}

TEST_CASE("key estimate sides") {
  const Params params = Params::make(3, 2.5);
  const CutoffField eta = build_cutoff(2.0, 0.2);
  SUBCASE("left side vanishes for bubbles") {
    for (auto [n, p] : std::vector<std::pair<int, double>>{{3, 2.5}, {4, 1.5}, {5, 3.0}}) {
      const Params pp = Params::make(n, p);
      const Bubble b = Bubble::centered(pp, 1.0);
      const KeyEstimateSides s = key_estimate_sides(b, eta, 2.0, pp);
      CHECK(s.rhs_integral > 0.0);
      CHECK(s.lhs <= 1e-10 * s.rhs_integral);
    }
  }
  SUBCASE("perturbed bubble matches the quadrature oracle") {
    const auto f = plap::testing::perturbed_bubble(params, 1.0, 0.01, Vector::Zero(3));
    for (const auto& row : oracle::kKeyEstimate) {
      const KeyEstimateSides s = key_estimate_sides(*f, eta, row.l, params);
      CHECK(rel_err(s.lhs, row.lhs) < 1e-6);
      CHECK(rel_err(s.rhs_integral, row.rhs) < 1e-8);
    }
  }
  SUBCASE("raising l shrinks both sides") {
    const auto f = plap::testing::perturbed_bubble(params, 1.0, 0.01, Vector::Zero(3));
    const KeyEstimateSides s2 = key_estimate_sides(*f, eta, 2.0, params);
    const KeyEstimateSides s4 = key_estimate_sides(*f, eta, 4.0, params);
    CHECK(s4.lhs > 0.0);
    CHECK(s4.lhs < s2.lhs);
    CHECK(s4.rhs_integral < s2.rhs_integral);
  }
  SUBCASE("invalid inputs") {
    const Bubble b = Bubble::centered(params, 1.0);
    CHECK_THROWS_AS(key_estimate_sides(b, eta, 1.5, params), Error);
    const FunctionField nonradial(3, [](const VectorRef& x) { return 1.0 + x(0) * x(0); });
    CHECK_THROWS_AS(key_estimate_sides(nonradial, eta, 2.0, params), Error);
  }
}
