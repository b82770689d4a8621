#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "plap/bubble.hpp"
#include "plap/cutoff.hpp"
#include "plap/energy.hpp"
#include "plap/error.hpp"
#include "plap/gradient.hpp"
#include "plap/io.hpp"
#include "plap/operators.hpp"
#include "plap/radial.hpp"
#include "plap/regions.hpp"
#include "plap/rigidity.hpp"

namespace plap::cli {
namespace {

constexpr double kResidualTol = 1e-6;
constexpr double kRingTol = 1e-7;
constexpr double kRingPerturbed = 1e-3;
constexpr double kProfileTol = 1e-10;
constexpr double kEnergyExponentTol = 0.02;
constexpr double kGradRatioGrowth = 10.0;
constexpr double kGradLimitTol = 0.01;
constexpr double kRadialTol = 1e-4;

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

Params make_params(int n, double p) {
  require(n >= 2, "--n must be at least 2");
  require(p > 1.0 && p < n, "need 1 < p < n");
  return Params::make(n, p);
}

Params checked(const BubbleArgs& a) {
  const Params params = make_params(a.n, a.p);
  require(a.lambda > 0.0 && std::isfinite(a.lambda), "--lambda must be positive");
  require(a.perturb >= 0.0 && a.perturb < 0.5, "--perturb must lie in [0, 0.5)");
  return params;
}

Json bubble_inputs(const BubbleArgs& a) {
  return Json{{"n", a.n}, {"p", a.p}, {"lambda", a.lambda}, {"perturb", a.perturb}};
}

/// The bubble U_{lambda,0}, or U (1 + perturb sin(r / lambda)).
FieldPtr make_field(const BubbleArgs& a, const Params& params) {
  const Bubble bubble = Bubble::centered(params, a.lambda);
  if (a.perturb == 0.0) return std::make_shared<Bubble>(bubble);
  const int n = params.n;
  const double p = params.p;
  const double lambda = a.lambda;
  const double eps = a.perturb;
  return std::make_shared<RadialProfileField>(
      Vector::Zero(n),
      [=](double r) {
        const RadialJet<double> b = bubble_jet<double>(n, p, lambda, r);
        const double s = 1.0 + eps * std::sin(r / lambda);
        const double ds = eps * std::cos(r / lambda) / lambda;
        const double d2s = -eps * std::sin(r / lambda) / (lambda * lambda);
        return RadialJet<double>{b.f * s, b.df * s + b.f * ds,
                                 b.d2f * s + 2.0 * b.df * ds + b.f * d2s};
      },
      bubble.gradient_scale());
}

/// Uniform points in the ball of radius R about the origin.
std::vector<Vector> sample_points(int n, double R, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vector dir(n);
    for (int i = 0; i < n; ++i) dir(i) = gauss(rng);
    dir.normalize();
    points.push_back(R * std::pow(unif(rng), 1.0 / n) * dir);
  }
  return points;
}

const char* verdict(bool ok) { return ok ? "ok" : "FAIL"; }

std::string h(double x) { return format_human(x); }

struct TensorStats {
  int noncritical = 0;
  double max_ratio = 0.0;  ///< ring_norm / (|trace|/n + 1)
  double min_ring = 0.0;
  int above_perturbed = 0;
};

TensorStats tensor_stats(const ScalarField& field, const std::vector<Vector>& points,
                         const Params& params) {
  TensorStats s;
  s.min_ring = HUGE_VAL;
  const double floor = gradient_floor(field, OperatorOptions{});
  for (const Vector& x : points) {
    if (field.gradient(x).norm() <= floor) continue;
    const TensorSample t = tensor_V(field, x, params);
    ++s.noncritical;
    s.max_ratio = std::max(s.max_ratio, t.ring_norm / (std::abs(t.trace) / params.n + 1.0));
    s.min_ring = std::min(s.min_ring, t.ring_norm);
    if (t.ring_norm > kRingPerturbed) ++s.above_perturbed;
  }
  if (s.noncritical == 0) s.min_ring = 0.0;
  return s;
}

std::vector<double> log_spaced(double a, double b, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(a * std::pow(b / a, i / double(count - 1)));
  return out;
}

}  // namespace

RunReport verify_bubble(const VerifyBubbleArgs& args, Sinks sinks) {
  const Params params = checked(args.bubble);
  require(args.samples >= 1, "--samples must be at least 1");
  const FieldPtr field = make_field(args.bubble, params);
  const double lambda = args.bubble.lambda;
  const auto points = sample_points(params.n, 4.0 * lambda, args.samples, args.seed);

  double max_residual = 0.0;
  int critical = 0;
  for (const Vector& x : points) {
    try {
      const OperatorSample s = residual(*field, x, params);
      max_residual =
          std::max(max_residual, std::abs(s.residual) / std::pow(s.value, params.source_exponent()));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CriticalPoint) throw;
      ++critical;
    }
  }
  const TensorStats tensor = tensor_stats(*field, points, params);
  const auto radii = log_spaced(1e-2 * lambda, 1e2 * lambda, 100);
  const AffineFit fit = v_profile_fit(*field, Vector::Zero(params.n), radii, params);

  const bool residual_ok = max_residual <= kResidualTol;
  const bool ring_ok = tensor.max_ratio <= kRingTol;
  const bool profile_ok = fit.relative_residual <= kProfileTol;

  RunReport report;
  report.command = "verify-bubble";
  report.inputs = bubble_inputs(args.bubble);
  report.inputs["samples"] = args.samples;
  report.inputs["seed"] = args.seed;
  report.tolerances = {{"residual", kResidualTol}, {"ring_norm", kRingTol},
                       {"v_profile", kProfileTol}};
  report.results = {
      {"residual", {{"max_relative", max_residual}, {"critical_points", critical}, {"ok", residual_ok}}},
      {"tensor", {{"max_ratio", tensor.max_ratio}, {"noncritical", tensor.noncritical}, {"ok", ring_ok}}},
      {"v_profile",
       {{"intercept", fit.intercept},
        {"slope", fit.slope},
        {"r_squared", fit.r_squared},
        {"relative_residual", fit.relative_residual},
        {"ok", profile_ok}}}};
  report.status = residual_ok && ring_ok && profile_ok ? Status::Pass : Status::Fail;

  sinks.out << "verify-bubble n=" << params.n << " p=" << h(params.p) << " lambda=" << h(lambda)
            << " perturb=" << h(args.bubble.perturb) << " samples=" << args.samples
            << " seed=" << args.seed << '\n'
            << "residual   max " << h(max_residual) << "  tol " << h(kResidualTol) << "  "
            << verdict(residual_ok) << '\n'
            << "ring_norm  max " << h(tensor.max_ratio) << "  tol " << h(kRingTol) << "  "
            << verdict(ring_ok) << '\n'
            << "v_profile  rel " << h(fit.relative_residual) << "  tol " << h(kProfileTol) << "  "
            << verdict(profile_ok) << '\n'
            << "status " << to_string(report.status) << '\n';
  return report;
}

RunReport classify(const ClassifyArgs& args, Sinks) {
  const Params params = make_params(args.n, args.p);
  const ClassificationOutcome outcome = plap::classify({args.n, args.p, args.alpha, args.energy_exponent});
  const Thresholds t = thresholds(params);
  auto opt = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };

  RunReport report;
  report.command = "classify";
  report.inputs = {{"n", args.n}, {"p", args.p}, {"alpha", opt(args.alpha)},
                   {"energy_exponent", opt(args.energy_exponent)}};
  report.results = to_json(outcome);
  report.results["thresholds"] = {{"alpha_hat", opt(t.alpha_hat)},
                                  {"alpha_check", opt(t.alpha_check)},
                                  {"alpha_bar", opt(t.alpha_bar)},
                                  {"alpha_tilde", opt(t.alpha_tilde)},
                                  {"p_check", t.p_check},
                                  {"finite_energy_exponent", t.finite_energy_exponent}};
  report.status = Status::Info;
  return report;
}

RunReport energy_scan(const EnergyScanArgs& args, Sinks sinks) {
  const Params params = checked(args.bubble);
  require(args.R_min > 0.0 && args.R_max > args.R_min, "need 0 < R-min < R-max");
  require(args.per_decade >= 1, "--per-decade must be at least 1");
  const FieldPtr field = make_field(args.bubble, params);
  const auto radii = log_radii(args.R_min, args.R_max, args.per_decade);
  require(radii.size() >= 4, "the radius range must hold at least 4 samples");

  std::vector<AnnulusEnergy> table;
  for (double R : radii) table.push_back(annulus_energy(*field, R, params));
  const GrowthFit fit = growth_fit(table, EnergyPart::Total);
  const double expected = -params.decay;
  const bool ok = std::abs(fit.exponent - expected) <= kEnergyExponentTol * std::abs(expected);

  RunReport report;
  report.command = "energy-scan";
  report.inputs = bubble_inputs(args.bubble);
  report.inputs["R_min"] = args.R_min;
  report.inputs["R_max"] = args.R_max;
  report.inputs["per_decade"] = args.per_decade;
  report.tolerances = {{"exponent_relative", kEnergyExponentTol}};
  Json rows = Json::array();
  for (const auto& e : table) rows.push_back({e.R, e.kinetic, e.potential, e.total});
  report.results = {{"columns", {"R", "kinetic", "potential", "total"}},
                    {"table", rows},
                    {"fit", to_json(fit)},
                    {"expected_exponent", expected}};
  if (params.p != 2.0) {
    const EnergyAllowance allowance = energy_growth_allowance(params, 0.0);
    report.results["allowance"] = {{"exponent", allowance.exponent},
                                   {"strict", allowance.strict},
                                   {"below", fit.exponent < allowance.exponent}};
  }
  report.status = ok ? Status::Pass : Status::Fail;

  write_energy_csv(sinks.out, table);
  sinks.log << "exponent " << h(fit.exponent) << " +- " << h(fit.stderr_) << "  expected "
            << h(expected) << "  " << verdict(ok) << '\n';
  return report;
}

RunReport grad_check(const GradCheckArgs& args, Sinks sinks) {
  const Params params = checked(args.bubble);
  const double eps_max = (params.p - 1.0) / (params.n - params.p);
  const double eps = args.epsilon.value_or(0.25 * eps_max);
  require(eps > 0.0 && eps < eps_max, "--eps must lie in (0, (p-1)/(n-p))");
  require(args.R_min > 0.0 && args.R_max > args.R_min, "need 0 < R-min < R-max");
  require(args.per_decade >= 1, "--per-decade must be at least 1");
  const FieldPtr field = make_field(args.bubble, params);
  const Bubble bubble = Bubble::centered(params, args.bubble.lambda);
  const Vector origin = Vector::Zero(params.n);

  const auto radii = log_radii(args.R_min, args.R_max, args.per_decade);
  std::vector<double> ratios;
  for (double R : radii) ratios.push_back(grad_estimate_ratio(*field, origin, R, eps, params).ratio);
  const double sup = *std::max_element(ratios.begin(), ratios.end());
  const bool bounded = sup <= kGradRatioGrowth * ratios.front();

  const double lambda = args.bubble.lambda;
  const auto ray = log_radii(lambda, 1e4 * lambda, args.per_decade);
  const double power = (params.n - 1.0) / (params.n - params.p);
  std::vector<double> grad_ratio;
  for (double r : ray) {
    const Vector x = r * Vector::Unit(params.n, 0);
    grad_ratio.push_back(field->gradient(x).norm() / std::pow(field->value(x), power));
  }
  const double limit = bubble.gradient_ratio_limit();
  const double limit_err = std::abs(grad_ratio.back() / limit - 1.0);
  const bool converges = limit_err <= kGradLimitTol;
  const LowerBoundEstimate lower = exterior_lower_bound(*field, ray.front(), ray, params);

  RunReport report;
  report.command = "grad-check";
  report.inputs = bubble_inputs(args.bubble);
  report.inputs["eps"] = eps;
  report.inputs["R_min"] = args.R_min;
  report.inputs["R_max"] = args.R_max;
  report.inputs["per_decade"] = args.per_decade;
  report.tolerances = {{"ratio_growth", kGradRatioGrowth}, {"limit_relative", kGradLimitTol}};
  report.results = {{"R", radii},
                    {"ratio", ratios},
                    {"ratio_growth", sup / ratios.front()},
                    {"r", ray},
                    {"gradient_ratio", grad_ratio},
                    {"gradient_ratio_limit", limit},
                    {"limit_relative_error", limit_err},
                    {"scaled", lower.scaled},
                    {"A_est", lower.A_est}};
  report.status = bounded && converges ? Status::Pass : Status::Fail;

  sinks.out << "series,x,value\n";
  for (std::size_t i = 0; i < radii.size(); ++i) {
    sinks.out << "ratio," << format_number(radii[i]) << ',' << format_number(ratios[i]) << '\n';
  }
  for (std::size_t i = 0; i < ray.size(); ++i) {
    sinks.out << "gradient_ratio," << format_number(ray[i]) << ',' << format_number(grad_ratio[i])
              << '\n';
  }
  for (std::size_t i = 0; i < lower.radii.size(); ++i) {
    sinks.out << "scaled," << format_number(lower.radii[i]) << ','
              << format_number(lower.scaled[i]) << '\n';
  }
  sinks.log << "ratio growth " << h(sup / ratios.front()) << "  bound " << h(kGradRatioGrowth)
            << "  " << verdict(bounded) << '\n'
            << "gradient ratio limit error " << h(limit_err) << "  tol " << h(kGradLimitTol)
            << "  " << verdict(converges) << '\n';
  return report;
}

RunReport tensor_check(const TensorCheckArgs& args, Sinks sinks) {
  const Params params = checked(args.bubble);
  require(args.samples >= 1, "--samples must be at least 1");
  const FieldPtr field = make_field(args.bubble, params);
  const auto points = sample_points(params.n, 4.0 * args.bubble.lambda, args.samples, args.seed);
  const TensorStats s = tensor_stats(*field, points, params);
  const bool ok = s.max_ratio <= kRingTol;
  const double fraction = s.noncritical ? double(s.above_perturbed) / s.noncritical : 0.0;

  RunReport report;
  report.command = "tensor-check";
  report.inputs = bubble_inputs(args.bubble);
  report.inputs["samples"] = args.samples;
  report.inputs["seed"] = args.seed;
  report.tolerances = {{"ring_norm", kRingTol}, {"perturbed_floor", kRingPerturbed}};
  report.results = {{"noncritical", s.noncritical},
                    {"max_ratio", s.max_ratio},
                    {"min_ring_norm", s.min_ring},
                    {"fraction_above_floor", fraction}};
  report.status = ok ? Status::Pass : Status::Fail;

  sinks.out << "tensor-check n=" << params.n << " p=" << h(params.p)
            << " perturb=" << h(args.bubble.perturb) << " samples=" << args.samples
            << " seed=" << args.seed << '\n'
            << "noncritical " << s.noncritical << '\n'
            << "max ring ratio " << h(s.max_ratio) << "  tol " << h(kRingTol) << "  "
            << verdict(ok) << '\n'
            << "fraction above " << h(kRingPerturbed) << ": " << h(fraction) << '\n'
            << "status " << to_string(report.status) << '\n';
  return report;
}

RunReport key_estimate(const KeyEstimateArgs& args, Sinks sinks) {
  const Params params = checked(args.bubble);
  require(args.R > 0.0, "--R must be positive");
  require(args.delta > 0.0 && args.delta < 0.5, "--delta must lie in (0, 0.5)");
  require(args.l >= 2.0, "--l must be at least 2");
  const FieldPtr field = make_field(args.bubble, params);
  const CutoffField eta = build_cutoff(args.R, args.delta);
  const KeyEstimateSides sides = key_estimate_sides(*field, eta, args.l, params);

  RunReport report;
  report.command = "key-estimate";
  report.inputs = bubble_inputs(args.bubble);
  report.inputs["R"] = args.R;
  report.inputs["delta"] = args.delta;
  report.inputs["l"] = args.l;
  report.results = {{"lhs", sides.lhs},
                    {"rhs_integral", sides.rhs_integral},
                    {"ratio", sides.lhs / sides.rhs_integral},
                    {"cutoff_C", eta.C()}};
  report.status = Status::Info;

  sinks.out << "key-estimate n=" << params.n << " p=" << h(params.p) << " R=" << h(args.R)
            << " delta=" << h(args.delta) << " l=" << h(args.l) << '\n'
            << "lhs " << h(sides.lhs) << '\n'
            << "rhs_integral " << h(sides.rhs_integral) << '\n'
            << "ratio " << h(sides.lhs / sides.rhs_integral) << '\n';
  return report;
}

RunReport radial_solve(const RadialSolveArgs& args, Sinks sinks) {
  const Params params = make_params(args.n, args.p);
  require(args.lambda > 0.0, "--lambda must be positive");
  require(!args.u0 || *args.u0 > 0.0, "--u0 must be positive");
  require(args.r_max > 0.0, "--r-max must be positive");
  require(args.tol > 1e-12 && args.tol < 1e-4, "--tol must lie in (1e-12, 1e-4)");
  const double c = bubble_constant<double>(params.n, params.p);
  const double u0 = args.u0.value_or(Bubble::centered(params, args.lambda).peak());
  const double lambda = c * std::pow(u0, -params.p / (params.n - params.p));
  const Bubble bubble = Bubble::centered(params, lambda);

  const RadialSolution sol = solve_radial(params, u0, args.r_max, args.tol);
  RunReport report;
  report.command = "radial-solve";
  report.inputs = {{"n", args.n}, {"p", args.p}, {"u0", u0}, {"r_max", args.r_max},
                   {"tol", args.tol}};
  report.tolerances = {{"sup_relative", kRadialTol}};
  report.results = radial_header(sol);
  report.results["lambda"] = lambda;
  bool ok = sol.termination == Termination::ReachedRMax;
  if (ok) {
    const double r_end = std::min(sol.r_max(), 20.0 * lambda);
    double err = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double r = r_end * i / 2000.0;
      const double exact = bubble.jet(r).f;
      err = std::max(err, std::abs(interpolate(sol, r).f - exact) / exact);
    }
    report.results["sup_relative_error"] = err;
    report.results["tail_constant"] = tail_constant(sol);
    report.results["tail_constant_exact"] = bubble.tail_constant();
    ok = err <= kRadialTol;
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < sol.r.size(); ++i) {
    rows.push_back({sol.r[i], sol.u[i], sol.du[i], sol.flux[i]});
  }
  report.results["columns"] = {"r", "u", "du", "flux"};
  report.results["rows"] = rows;
  report.status = ok ? Status::Pass : Status::Fail;

  write_radial_csv(sinks.out, sol);
  sinks.log << "termination " << to_string(sol.termination) << "  nodes " << sol.r.size();
  if (report.results.contains("sup_relative_error")) {
    sinks.log << "  sup error " << h(report.results["sup_relative_error"].get<double>());
  }
  sinks.log << "  " << verdict(ok) << '\n';
  return report;
}

RunReport raster(const RasterArgs& args, Sinks sinks) {
  require(args.n >= 2, "--n must be at least 2");
  require(args.cells >= 1, "--cells must be at least 1");
  std::vector<double> p_grid;
  for (int i = 0; i < args.cells; ++i) p_grid.push_back(1.0 + (args.n - 1.0) * (i + 0.5) / args.cells);
  std::vector<std::optional<double>> alpha_grid;
  for (double a : args.alpha) alpha_grid.emplace_back(a);
  if (alpha_grid.empty()) alpha_grid.emplace_back(std::nullopt);
  const auto cells = plap::raster(args.n, p_grid, alpha_grid, args.energy_exponent);

  RunReport report;
  report.command = "raster";
  report.inputs = {{"n", args.n}, {"alpha", args.alpha}, {"cells", args.cells},
                   {"energy_exponent", args.energy_exponent ? Json(*args.energy_exponent) : Json(nullptr)}};
  Json rows = Json::array();
  int covered = 0;
  for (const auto& c : cells) {
    covered += c.outcome.covered ? 1 : 0;
    Json row = to_json(c.outcome);
    row.erase("all_cases");
    row["p"] = c.p;
    row["alpha"] = c.alpha ? Json(*c.alpha) : Json(nullptr);
    rows.push_back(row);
  }
  report.results = {{"cells", rows}, {"covered", covered}, {"total", cells.size()}};
  report.status = Status::Info;

  write_raster_csv(sinks.out, cells);
  sinks.log << "covered " << covered << " of " << cells.size() << '\n';
  return report;
}

}  // namespace plap::cli
