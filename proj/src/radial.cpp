#include "plap/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "plap/error.hpp"

namespace plap {
namespace {

// State (u, W) with W = w / r^n, w = r^{n-1} |u'|^{p-2} u', in t = ln r:
//   du/dt = -|W|^{1/(p-1)} r^{p/(p-1)}  (sign of W restored)
//   dW/dt = -u^{p*-1} - n W
using State = std::array<double, 2>;

double signed_pow(double x, double e) { return std::copysign(std::pow(std::abs(x), e), x); }

struct RadialRhs {
  int n;
  double p;
  double q;  // p* - 1
  double m;  // p/(p-1)

  State operator()(double t, const State& y) const {
    const double W = y[1];
    const double du = W == 0.0 ? 0.0
                               : std::copysign(std::exp(std::log(std::abs(W)) / (p - 1.0) + m * t), W);
    return {du, -signed_pow(y[0], q) - n * W};
  }
};

/// Leading two terms of the regular expansion at r = 0.
struct Series {
  double u0;
  double c1;  // u = u0 - c1 r^m + c2 r^{2m}
  double c2;
  double m;
  double W0;  // W = W0 + W1 r^m
  double W1;

  Series(const Params& params, double u0_) : u0(u0_) {
    const double n = params.n;
    const double p = params.p;
    const double q = params.source_exponent();
    m = params.conjugate();
    const double base = std::pow(std::pow(u0, q) / n, 1.0 / (p - 1.0));
    c1 = (p - 1.0) / p * base;
    c2 = base * q * c1 * n / (u0 * (n + m) * (p - 1.0)) / (2.0 * m);
    W0 = -std::pow(u0, q) / n;
    W1 = q * std::pow(u0, q - 1.0) * c1 / (n + m);
  }

  RadialJet<double> jet(double r) const {
    RadialJet<double> j;
    if (r <= 0.0) {
      j.f = u0;
      j.df = 0.0;
      j.d2f = m > 2.0 ? 0.0 : (m == 2.0 ? -2.0 * c1 : -std::numeric_limits<double>::infinity());
      return j;
    }
    const double rm = std::pow(r, m);
    j.f = u0 - c1 * rm + c2 * rm * rm;
    j.df = (-c1 * m * rm + 2.0 * m * c2 * rm * rm) / r;
    j.d2f = (-c1 * m * (m - 1.0) * rm + 2.0 * m * (2.0 * m - 1.0) * c2 * rm * rm) / (r * r);
    return j;
  }

  double W(double r) const { return W0 + W1 * std::pow(r, m); }
};

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

struct StepResult {
  State y;
  State k7;  // derivative at the new point (FSAL)
  double err;
};

StepResult dp_step(const RadialRhs& f, double t, const State& y, const State& k1, double h,
                   double rtol) {
  auto comb = [&](std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [c, k] : terms) {
      out[0] += h * c * (*k)[0];
      out[1] += h * c * (*k)[1];
    }
    return out;
  };
  const State k2 = f(t + h / 5.0, comb({{a21, &k1}}));
  const State k3 = f(t + 3.0 * h / 10.0, comb({{a31, &k1}, {a32, &k2}}));
  const State k4 = f(t + 4.0 * h / 5.0, comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const State k5 = f(t + 8.0 * h / 9.0, comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const State k6 =
      f(t + h, comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  StepResult res;
  res.y = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  res.k7 = f(t + h, res.y);
  res.err = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * res.k7[i]);
    const double scale = rtol * std::max(std::abs(y[i]), std::abs(res.y[i])) +
                         std::numeric_limits<double>::min();
    res.err = std::max(res.err, std::abs(e) / scale);
  }
  if (!std::isfinite(res.err)) res.err = std::numeric_limits<double>::infinity();
  return res;
}

void push_node(RadialSolution& sol, const Params& params, double r, double u, double W) {
  const double n = params.n;
  const double p = params.p;
  const double du = std::copysign(std::pow(std::abs(W) * r, 1.0 / (p - 1.0)), W);
  const double flux = W * std::pow(r, n);
  const double abs_du = std::abs(du);
  double d2u = 0.0;
  if (abs_du > 0.0) {
    d2u = -(signed_pow(u, params.source_exponent()) + (n - 1.0) * W) /
          ((p - 1.0) * std::pow(abs_du, p - 2.0));
  }
  sol.r.push_back(r);
  sol.u.push_back(u);
  sol.du.push_back(du);
  sol.flux.push_back(flux);
  sol.d2u.push_back(d2u);
}

// Quintic Hermite basis on s in [0, 1]: value, first and second derivative.
struct Quintic {
  static std::array<double, 6> basis(double s, int deriv) {
    // Coefficients of s^0..s^5 for H0..H5.
    static constexpr double c[6][6] = {
        {1, 0, 0, -10, 15, -6},   {0, 1, 0, -6, 8, -3}, {0, 0, 0.5, -1.5, 1.5, -0.5},
        {0, 0, 0, 10, -15, 6},    {0, 0, 0, -4, 7, -3}, {0, 0, 0, 0.5, -1, 0.5}};
    std::array<double, 6> out{};
    for (int b = 0; b < 6; ++b) {
      double v = 0.0;
      for (int k = deriv; k < 6; ++k) {
        double coef = c[b][k];
        for (int d = 0; d < deriv; ++d) coef *= (k - d);
        v += coef * std::pow(s, k - deriv);
      }
      out[b] = v;
    }
    return out;
  }
};

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::ReachedRMax: return "reached_rmax";
    case Termination::UHitZero: return "u_hit_zero";
    case Termination::StepFailure: return "step_failure";
  }
  return "step_failure";
}

double radial_length_scale(const Params& params, double u0) {
  return std::pow(u0, -params.p / (params.n - params.p));
}

RadialSolution solve_radial(const Params& params, double u0, double r_max, double tol,
                            const RadialOptions& options) {
  if (!(u0 > 0.0) || !std::isfinite(u0)) {
    fail(ErrorCode::InvalidInput, "center value u0 must be finite and > 0");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    fail(ErrorCode::InvalidInput, "r_max must be finite and > 0");
  }
  if (!(tol > 1e-12) || !(tol < 1e-4)) {
    fail(ErrorCode::InvalidInput, "tol must lie in (1e-12, 1e-4)");
  }
  const Series series(params, u0);
  const RadialRhs rhs{params.n, params.p, params.source_exponent(), params.conjugate()};

  RadialSolution sol;
  sol.params = params;
  sol.u0 = u0;
  sol.tol = tol;
  sol.r.push_back(0.0);
  sol.u.push_back(u0);
  sol.du.push_back(0.0);
  sol.flux.push_back(0.0);
  sol.d2u.push_back(series.jet(0.0).d2f);

  // Start where the leading correction is series_size relative to u0.
  const double r_start =
      std::min(std::pow(options.series_size * u0 / series.c1, 1.0 / series.m), 0.5 * r_max);
  State y{series.jet(r_start).f, series.W(r_start)};
  push_node(sol, params, r_start, y[0], y[1]);

  double t = std::log(r_start);
  const double t_end = std::log(r_max);
  double h = std::min(0.01, options.max_log_step);
  State k1 = rhs(t, y);
  int steps = 0;
  while (t < t_end) {
    if (++steps > options.max_steps) {
      sol.termination = Termination::StepFailure;
      std::ostringstream os;
      os << "step budget " << options.max_steps << " exhausted at r = " << std::exp(t);
      fail(ErrorCode::StepFailure, os.str());
    }
    h = std::min({h, options.max_log_step, t_end - t});
    const StepResult s = dp_step(rhs, t, y, k1, h, tol);
    if (s.err > 1.0) {
      ++sol.rejected_steps;
      h *= std::max(0.2, 0.9 * std::pow(s.err, -0.2));
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        fail(ErrorCode::StepFailure, "step size underflow in the radial integration");
      }
      continue;
    }
    const double t_new = (t_end - t - h) <= 1e-14 * std::max(1.0, std::abs(t_end)) ? t_end : t + h;
    if (s.y[0] <= 0.0) {
      // Locate u = 0 on the cubic Hermite in t through both endpoints.
      auto u_at = [&](double tau) {
        const double z = (tau - t) / h;
        const double h00 = 2 * z * z * z - 3 * z * z + 1, h10 = z * z * z - 2 * z * z + z;
        const double h01 = -2 * z * z * z + 3 * z * z, h11 = z * z * z - z * z;
        return h00 * y[0] + h10 * h * k1[0] + h01 * s.y[0] + h11 * h * s.k7[0];
      };
      double lo = t;
      double hi = t_new;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (u_at(mid) > 0.0 ? lo : hi) = mid;
      }
      sol.termination = Termination::UHitZero;
      sol.r_zero = std::exp(0.5 * (lo + hi));
      return sol;
    }
    t = t_new;
    y = s.y;
    k1 = s.k7;
    push_node(sol, params, std::exp(t), y[0], y[1]);
    h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(s.err, 1e-10), -0.2)));
  }
  sol.r.back() = r_max;
  sol.termination = Termination::ReachedRMax;
  return sol;
}

RadialJet<double> interpolate(const RadialSolution& sol, double r) {
  if (sol.r.size() < 2) {
    fail(ErrorCode::InterpolationDomain, "radial solution has no interval to interpolate");
  }
  if (!(r >= 0.0) || r > sol.r_max()) {
    std::ostringstream os;
    os << "radius " << r << " outside [0, " << sol.r_max() << "]";
    fail(ErrorCode::InterpolationDomain, os.str());
  }
  if (r <= sol.r[1]) {
    return Series(sol.params, sol.u0).jet(r);
  }
  const auto it = std::upper_bound(sol.r.begin(), sol.r.end(), r);
  const std::size_t i1 = std::min<std::size_t>(static_cast<std::size_t>(it - sol.r.begin()),
                                               sol.r.size() - 1);
  const std::size_t i0 = i1 - 1;
  const double h = sol.r[i1] - sol.r[i0];
  const double s = (r - sol.r[i0]) / h;
  const std::array<double, 6> data = {sol.u[i0],       h * sol.du[i0],  h * h * sol.d2u[i0],
                                      sol.u[i1],       h * sol.du[i1],  h * h * sol.d2u[i1]};
  RadialJet<double> jet;
  const auto b0 = Quintic::basis(s, 0);
  const auto b1 = Quintic::basis(s, 1);
  const auto b2 = Quintic::basis(s, 2);
  for (int k = 0; k < 6; ++k) {
    jet.f += data[k] * b0[k];
    jet.df += data[k] * b1[k];
    jet.d2f += data[k] * b2[k];
  }
  jet.df /= h;
  jet.d2f /= h * h;
  return jet;
}

double tail_constant(const RadialSolution& sol) {
  if (sol.r.size() < 3 || sol.termination != Termination::ReachedRMax) {
    fail(ErrorCode::InvalidInput, "tail estimate needs a profile that reached r_max");
  }
  const Params& params = sol.params;
  const double m = params.conjugate();
  // u r^{decay} = L (1 + c1 x + c2 x^2 + ...) with x = r^{-p/(p-1)}; Neville to x = 0.
  constexpr int kPoints = 4;
  std::array<double, kPoints> x{};
  std::array<double, kPoints> f{};
  double r = sol.r_max();
  for (int i = 0; i < kPoints; ++i, r *= 0.5) {
    x[i] = std::pow(r, -m);
    f[i] = interpolate(sol, r).f * std::pow(r, params.decay);
  }
  for (int level = 1; level < kPoints; ++level) {
    for (int i = 0; i + level < kPoints; ++i) {
      f[i] = (x[i + level] * f[i] - x[i] * f[i + 1]) / (x[i + level] - x[i]);
    }
  }
  return f[0];
}

ShootResult shoot_for_bubble(const Params& params, double target, const ShootOptions& options) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    fail(ErrorCode::InvalidInput, "target decay constant must be finite and > 0");
  }
  ShootResult result;
  auto residual = [&](double log_u0, RadialSolution* keep) {
    const double u0 = std::exp(log_u0);
    RadialSolution sol = solve_radial(params, u0, options.reach * radial_length_scale(params, u0),
                                      options.ode_tol);
    if (sol.termination != Termination::ReachedRMax) {
      fail(ErrorCode::NoConvergence, "trial profile did not stay positive");
    }
    const double value = std::log(tail_constant(sol)) - std::log(target);
    if (keep) *keep = std::move(sol);
    return value;
  };

  // The tail constant decreases with u0: bracket, then Illinois false position.
  double a = 0.0;
  double fa = residual(a, nullptr);
  double b = fa > 0.0 ? 2.0 : -2.0;
  double fb = residual(b, nullptr);
  int iterations = 2;
  while (fa * fb > 0.0) {
    if (++iterations > options.max_iterations) {
      fail(ErrorCode::NoConvergence, "could not bracket the center value");
    }
    a = b;
    fa = fb;
    b += (fa > 0.0 ? 2.0 : -2.0);
    fb = residual(b, nullptr);
  }
  int side = 0;
  double c = b;
  for (;;) {
    if (++iterations > options.max_iterations) {
      fail(ErrorCode::NoConvergence, "center value iteration did not converge");
    }
    c = (a * fb - b * fa) / (fb - fa);
    const double fc = residual(c, nullptr);
    if (std::abs(fc) <= options.rel_tol || std::abs(b - a) <= 1e-15) {
      break;
    }
    if (fc * fb > 0.0) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  residual(c, &result.solution);
  result.u0 = std::exp(c);
  result.iterations = iterations;
  return result;
}

std::shared_ptr<RadialProfileField> as_field(const RadialSolution& sol, const Vector& center) {
  if (sol.termination != Termination::ReachedRMax) {
    fail(ErrorCode::InvalidInput, "only profiles that reached r_max can be interpolated");
  }
  if (center.size() != sol.params.n) {
    fail(ErrorCode::InvalidInput, "center dimension does not match n");
  }
  const double scale = sol.u0 / radial_length_scale(sol.params, sol.u0);
  return std::make_shared<RadialProfileField>(
      center, [sol](double r) { return interpolate(sol, r); }, scale);
}

}  // namespace plap
