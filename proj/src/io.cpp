#include "plap/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "plap/error.hpp"

namespace plap {
namespace {

Json optional_number(const std::optional<double>& x) {
  if (!x) return nullptr;
  if (!std::isfinite(*x)) return *x > 0 ? "inf" : (*x < 0 ? "-inf" : "nan");
  return *x;
}

Json case_hit_json(const CaseHit& hit) {
  return Json{{"case_id", std::string(to_string(hit.id))},
              {"threshold", optional_number(hit.threshold)},
              {"margin", optional_number(hit.margin)},
              {"threshold_name", hit.threshold_name}};
}

std::string format_with(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

std::string optional_csv(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string();
}

}  // namespace

Json to_json(const Bubble& bubble) {
  Json center = Json::array();
  for (Eigen::Index i = 0; i < bubble.center().size(); ++i) center.push_back(bubble.center()(i));
  return Json{{"n", bubble.params().n},
              {"p", bubble.params().p},
              {"lambda", bubble.lambda()},
              {"center", center}};
}

Bubble bubble_from_json(const Json& j) {
  try {
    const Params params = Params::make(j.at("n").get<int>(), j.at("p").get<double>());
    const double lambda = j.at("lambda").get<double>();
    Vector center = Vector::Zero(params.n);
    if (j.contains("center")) {
      const auto& c = j.at("center");
      if (!c.is_array() || static_cast<int>(c.size()) != params.n) {
        fail(ErrorCode::InvalidInput, "center must be an array of length n");
      }
      for (int i = 0; i < params.n; ++i) center(i) = c[i].get<double>();
    }
    return Bubble(params, lambda, center);
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("bad bubble record: ") + e.what());
  }
}

Json to_json(const ClassificationOutcome& outcome) {
  Json all = Json::array();
  for (const auto& hit : outcome.all_cases) all.push_back(case_hit_json(hit));
  return Json{{"covered", outcome.covered},
              {"case_id", std::string(to_string(outcome.case_id))},
              {"active_threshold", optional_number(outcome.active_threshold)},
              {"margin", optional_number(outcome.margin)},
              {"threshold_name", outcome.threshold_name},
              {"note", outcome.note},
              {"all_cases", all}};
}

Json to_json(const GrowthFit& fit) {
  return Json{{"exponent", fit.exponent},
              {"stderr", fit.stderr_},
              {"R_min", fit.R_min},
              {"R_max", fit.R_max},
              {"samples", fit.samples}};
}

Json radial_header(const RadialSolution& sol) {
  Json j{{"n", sol.params.n},
         {"p", sol.params.p},
         {"u0", sol.u0},
         {"tol", sol.tol},
         {"termination", std::string(to_string(sol.termination))},
         {"r_max", sol.r_max()},
         {"nodes", sol.r.size()},
         {"rejected_steps", sol.rejected_steps}};
  if (sol.termination == Termination::UHitZero) j["r_zero"] = sol.r_zero;
  return j;
}

std::string format_number(double x) { return format_with("%.17g", x); }

std::string format_human(double x) { return format_with("%.9g", x); }

void write_energy_csv(std::ostream& os, std::span<const AnnulusEnergy> table) {
  os << "R,kinetic,potential,total\n";
  for (const auto& e : table) {
    os << format_number(e.R) << ',' << format_number(e.kinetic) << ','
       << format_number(e.potential) << ',' << format_number(e.total) << '\n';
  }
}

void write_radial_csv(std::ostream& os, const RadialSolution& sol) {
  os << "r,u,du,flux\n";
  for (std::size_t i = 0; i < sol.r.size(); ++i) {
    os << format_number(sol.r[i]) << ',' << format_number(sol.u[i]) << ','
       << format_number(sol.du[i]) << ',' << format_number(sol.flux[i]) << '\n';
  }
}

void write_raster_csv(std::ostream& os, std::span<const RasterCell> cells) {
  os << "n,p,alpha,case_id,threshold,margin\n";
  for (const auto& c : cells) {
    os << c.n << ',' << format_number(c.p) << ',' << optional_csv(c.alpha) << ','
       << to_string(c.outcome.case_id) << ',' << optional_csv(c.outcome.active_threshold) << ','
       << optional_csv(c.outcome.margin) << '\n';
  }
}

}  // namespace plap
