#include "plap/energy.hpp"

#include <cmath>
#include <sstream>

#include "plap/error.hpp"

namespace plap {
namespace {

Vector radial_center_of(const ScalarField& field) {
  const auto c = field.radial_center();
  if (!c) {
    fail(ErrorCode::InvalidInput, "energy quadratures need a radial field with a known center");
  }
  return *c;
}

QuadratureOptions quad_options(const EnergyOptions& options) {
  QuadratureOptions q;
  q.rel_tol = options.rel_tol;
  q.max_intervals = options.max_intervals;
  return q;
}

/// r -> |S^{n-1}| r^{n-1} g(u(r), |u'(r)|) along the first axis.
template <typename G>
std::function<double(double)> shell(const ScalarField& field, const Vector& center, int n, G g) {
  const double area = unit_sphere_area(n);
  return [&field, center, n, g, area](double r) {
    Vector x = center;
    x(0) += r;
    const double u = field.value(x);
    const double s = field.gradient(x).norm();
    return area * std::pow(r, n - 1) * g(u, s);
  };
}

std::vector<double> ball_breaks(double R, const EnergyOptions& options) {
  return log_breaks(options.r_min_fraction * R, R, 4);
}

}  // namespace

double weighted_energy_beta(const Params& params, double t) {
  if (!(t < -1.0)) {
    fail(ErrorCode::DomainError, "weighted energy exponent needs t < -1");
  }
  const double n = params.n;
  const double p = params.p;
  if (t + p > 0.0) return -t * (n - p) / p;
  return -(t + 1.0) * (n - p) / (p - 1.0);
}

WeightedEnergyParams WeightedEnergyParams::make(const Params& params, double t) {
  return {t, weighted_energy_beta(params, t)};
}

AnnulusEnergy annulus_energy(const ScalarField& field, double R, const Params& params,
                             const EnergyOptions& options) {
  if (!(R > 0.0)) {
    fail(ErrorCode::InvalidInput, "annulus radius R must be > 0");
  }
  const Vector center = radial_center_of(field);
  const double p = params.p;
  const double ps = params.p_star;
  const auto q = quad_options(options);
  AnnulusEnergy e;
  e.R = R;
  e.kinetic =
      integrate(shell(field, center, params.n, [p](double, double s) { return std::pow(s, p) / p; }),
                R, 2.0 * R, q)
          .value;
  e.potential = integrate(shell(field, center, params.n,
                                [ps](double u, double) { return std::pow(u, ps) / ps; }),
                          R, 2.0 * R, q)
                    .value;
  e.total = e.kinetic + e.potential;
  return e;
}

std::vector<double> log_radii(double R_min, double R_max, int per_decade) {
  if (!(R_min > 0.0) || !(R_max > R_min) || per_decade < 1) {
    fail(ErrorCode::InvalidInput, "log_radii needs 0 < R_min < R_max and per_decade >= 1");
  }
  const int steps = static_cast<int>(std::lround(std::log10(R_max / R_min) * per_decade));
  std::vector<double> radii;
  for (int i = 0; i <= std::max(steps, 1); ++i) {
    radii.push_back(R_min * std::pow(R_max / R_min, static_cast<double>(i) / std::max(steps, 1)));
  }
  radii.back() = R_max;
  return radii;
}

GrowthFit growth_fit(std::span<const AnnulusEnergy> table, EnergyPart which) {
  if (table.size() < 4) {
    fail(ErrorCode::InvalidInput, "growth fit needs at least 4 radii");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& e : table) {
    const double v = which == EnergyPart::Kinetic     ? e.kinetic
                     : which == EnergyPart::Potential ? e.potential
                                                      : e.total;
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "energy " << v << " at R = " << e.R << " is not positive (infinite decay)";
      fail(ErrorCode::DegenerateFit, os.str());
    }
    x.push_back(std::log(e.R));
    y.push_back(std::log(v));
  }
  const double count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  GrowthFit fit;
  fit.exponent = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (my + fit.exponent * (x[i] - mx));
    sse += e * e;
  }
  fit.stderr_ = std::sqrt(sse / (count - 2.0) / sxx);
  fit.R_min = table.front().R;
  fit.R_max = table.back().R;
  fit.samples = static_cast<int>(table.size());
  return fit;
}

GrowthFit growth_fit(const ScalarField& field, std::span<const double> radii, const Params& params,
                     EnergyPart which, const EnergyOptions& options) {
  std::vector<AnnulusEnergy> table;
  table.reserve(radii.size());
  for (double R : radii) {
    table.push_back(annulus_energy(field, R, params, options));
  }
  return growth_fit(table, which);
}

double weighted_energy(const ScalarField& field, double t, double R, const Params& params,
                       const EnergyOptions& options) {
  weighted_energy_beta(params, t);  // validates t
  if (!(R > 0.0)) {
    fail(ErrorCode::InvalidInput, "ball radius R must be > 0");
  }
  const Vector center = radial_center_of(field);
  const double n = params.n;
  const double p = params.p;
  const double pot_power = (n * p + t * (n - p)) / (n - p);
  auto integrand = shell(field, center, params.n, [=](double u, double s) {
    return std::pow(u, pot_power) + std::pow(u, t) * std::pow(s, p);
  });
  const auto q = quad_options(options);
  const auto breaks = ball_breaks(R, options);
  const double total = integrate_panels(integrand, breaks, q).value;
  // Halving the inner guard must not move the result at the requested tolerance.
  const double r_min = breaks.front();
  const double inner = integrate(integrand, 0.5 * r_min, r_min, q).value;
  if (!std::isfinite(total) || std::abs(inner) > options.rel_tol * std::abs(total)) {
    fail(ErrorCode::Unbounded, "weighted energy integrand is not integrable at the center");
  }
  return total;
}

EquivalenceReport equivalence_check(const ScalarField& field, double R, const Params& params,
                                    double C, const EnergyOptions& options) {
  if (!(R > 0.0)) {
    fail(ErrorCode::InvalidInput, "ball radius R must be > 0");
  }
  const Vector center = radial_center_of(field);
  const double n = params.n;
  const double p = params.p;
  const double ps = params.p_star;
  auto kin = shell(field, center, params.n, [p](double, double s) { return std::pow(s, p); });
  auto pot = shell(field, center, params.n, [ps](double u, double) { return std::pow(u, ps); });
  const auto q = quad_options(options);
  const auto breaks = ball_breaks(R, options);

  EquivalenceReport rep;
  rep.R = R;
  rep.kin_ball = integrate_panels(kin, breaks, q).value;
  rep.pot_ball = integrate_panels(pot, breaks, q).value;
  rep.kin_ball_2R = rep.kin_ball + integrate(kin, R, 2.0 * R, q).value;
  rep.pot_ball_2R = rep.pot_ball + integrate(pot, R, 2.0 * R, q).value;
  rep.bound_rhs_l28 = rep.pot_ball_2R + std::pow(rep.pot_ball_2R, (n - p) / n);
  rep.bound_rhs_l29 =
      rep.kin_ball_2R + std::pow(rep.kin_ball_2R, n * (p - 1.0) / (n * (p - 1.0) + p));
  rep.min_C_l28 = rep.bound_rhs_l28 > 0.0 ? rep.kin_ball / rep.bound_rhs_l28
                                          : (rep.kin_ball > 0.0 ? INFINITY : 0.0);
  rep.min_C_l29 = rep.bound_rhs_l29 > 0.0 ? rep.pot_ball / rep.bound_rhs_l29
                                          : (rep.pot_ball > 0.0 ? INFINITY : 0.0);
  rep.holds_l28 = rep.kin_ball <= C * rep.bound_rhs_l28;
  rep.holds_l29 = rep.pot_ball <= C * rep.bound_rhs_l29;
  return rep;
}

}  // namespace plap
