#include "plap/regions.hpp"

#include <sstream>

#include "plap/error.hpp"

namespace plap {

std::string_view to_string(CaseId id) {
  switch (id) {
    case CaseId::T1_1_i: return "T1.1-i";
    case CaseId::T1_1_ii: return "T1.1-ii";
    case CaseId::T1_1_iii: return "T1.1-iii";
    case CaseId::T1_2_i: return "T1.2-i";
    case CaseId::T1_2_ii: return "T1.2-ii";
    case CaseId::T1_3_i: return "T1.3-i";
    case CaseId::T1_3_ii: return "T1.3-ii";
    case CaseId::T1_4_i: return "T1.4-i";
    case CaseId::T1_4_ii: return "T1.4-ii";
    case CaseId::T1_4_iii: return "T1.4-iii";
    case CaseId::T1_4_iv: return "T1.4-iv";
    case CaseId::C1_5: return "C1.5";
    case CaseId::C1_6: return "C1.6";
    case CaseId::NotCovered: return "NOT_COVERED";
  }
  return "NOT_COVERED";
}

Thresholds thresholds(const Params& params) {
  const double n = params.n;
  const double p = params.p;
  Thresholds t;
  if (p > 2.0) {
    t.alpha_hat = alpha_hat(n, p);
    t.alpha_check = alpha_check(n, p);
  }
  if (n != 2.0 * p) t.alpha_bar = alpha_bar(n, p);
  if (n != 3.0 * p - 2.0) t.alpha_tilde = alpha_tilde(n, p);
  t.p_check = p_check(n);
  t.finite_energy_exponent = -(n - p) / p;
  return t;
}

EnergyAllowance energy_growth_allowance(const Params& params, std::optional<double> alpha) {
  const double n = params.n;
  const double p = params.p;
  if (p == 2.0) {
    fail(ErrorCode::DomainError, "no energy-growth case applies at p = 2");
  }
  EnergyAllowance out;
  if (p <= 2.0 * n / (n + 1.0)) {
    out.exponent = n / (n - 1.0);
    out.which = EnergyCase::I;
    return out;
  }
  if (p < 2.0) {
    out.exponent = (2.0 - p) * (n - p) / (2.0 * (p - 1.0) * (p - 1.0));
    out.which = EnergyCase::II;
    return out;
  }
  if (!alpha) {
    fail(ErrorCode::MissingAlpha, "energy-growth case iii (p > 2) needs the growth exponent alpha");
  }
  if (!(*alpha >= 0.0)) {
    fail(ErrorCode::DomainError, "energy-growth case iii needs alpha >= 0");
  }
  const double d = 2.0 + (n - 3.0) * p;
  out.exponent = 2.0 * (n - p) / d - *alpha * p * (n * (p - 2.0) + p) / ((n - p) * d);
  out.which = EnergyCase::III;
  out.strict = true;
  return out;
}

std::vector<CaseHit> alpha_branch_thresholds(int n, double p) {
  std::vector<CaseHit> hits;
  if (p == 2.0 || n == 2) return hits;
  const double nd = n;
  auto hit = [&](CaseId id, double threshold, const char* name) {
    hits.push_back({id, threshold, std::nullopt, name});
  };
  if (p < 2.0) {
    if (n == 3) {
      if (p <= 1.5) hit(CaseId::T1_3_i, alpha_bar(nd, p), "alpha_bar");
    } else {
      hit(CaseId::T1_3_ii, alpha_bar(nd, p), "alpha_bar");
    }
    return hits;
  }
  const double pc = p_check(nd);
  const double upper = (nd + 2.0) / 3.0;
  if (n == 3) {
    hit(CaseId::T1_4_i, alpha_check(nd, p), "alpha_check");
  } else if (n == 4) {
    if (p < pc) {
      hit(CaseId::T1_4_ii, alpha_hat(nd, p), "alpha_hat");
    } else {
      hit(CaseId::T1_4_ii, alpha_check(nd, p), "alpha_check");
    }
  } else if (n == 5 || n == 6) {
    if (p < upper) {
      hit(CaseId::T1_4_iii, alpha_bar(nd, p), "alpha_bar");
    } else if (p < pc) {
      hit(CaseId::T1_4_iii, alpha_hat(nd, p), "alpha_hat");
    } else {
      hit(CaseId::T1_4_iii, alpha_check(nd, p), "alpha_check");
    }
  } else {
    if (p <= nd / 3.0) {
      hit(CaseId::T1_4_iv, alpha_tilde(nd, p), "alpha_tilde");
    } else if (p < upper) {
      hit(CaseId::T1_4_iv, alpha_bar(nd, p), "alpha_bar");
    } else if (p < pc) {
      hit(CaseId::T1_4_iv, alpha_hat(nd, p), "alpha_hat");
    } else {
      hit(CaseId::T1_4_iv, alpha_check(nd, p), "alpha_check");
    }
  }
  return hits;
}

ClassificationOutcome classify(const ClassificationQuery& query) {
  const Params params = Params::make(query.n, query.p);
  const int n = params.n;
  const double p = params.p;
  ClassificationOutcome out;
  if (p == 2.0) {
    out.note = "p = 2 excluded: the semilinear case is not treated here";
    return out;
  }
  auto& hits = out.all_cases;

  if (n == 2) {
    hits.push_back({CaseId::T1_2_i, std::nullopt, std::nullopt, ""});
  } else if (n == 3 && p > 1.5 && p < 2.0) {
    hits.push_back({CaseId::T1_2_ii, std::nullopt, std::nullopt, ""});
  }

  if (query.alpha) {
    for (CaseHit h : alpha_branch_thresholds(n, p)) {
      if (*query.alpha < *h.threshold) {
        h.margin = *h.threshold - *query.alpha;
        hits.push_back(h);
      }
    }
  }

  if (query.energy_exponent) {
    const double k = *query.energy_exponent;
    std::optional<double> alpha_eff;
    if (query.alpha) alpha_eff = std::max(*query.alpha, 0.0);
    if (p < 2.0 || alpha_eff) {
      const EnergyAllowance a = energy_growth_allowance(params, alpha_eff);
      const double margin = a.exponent - k;
      if (a.strict ? margin > 0.0 : margin >= 0.0) {
        const CaseId id = a.which == EnergyCase::I    ? CaseId::T1_1_i
                          : a.which == EnergyCase::II ? CaseId::T1_1_ii
                                                      : CaseId::T1_1_iii;
        hits.push_back({id, a.exponent, margin, "energy"});
      }
    } else {
      out.note = "energy case iii needs alpha for p > 2";
    }
  }

  if (query.alpha) {
    const double alpha = *query.alpha;
    if (alpha <= 0.0 && (n <= 6 || p > n / 3.0)) {
      hits.push_back({CaseId::C1_5, 0.0, 0.0 - alpha, "bounded"});
    }
    const double fe = -(n - p) / p;
    if (alpha <= fe) {
      hits.push_back({CaseId::C1_6, fe, fe - alpha, "finite_energy_decay"});
    }
  }

  if (!hits.empty()) {
    const CaseHit& first = hits.front();
    out.covered = true;
    out.case_id = first.id;
    out.active_threshold = first.threshold;
    out.margin = first.margin;
    out.threshold_name = first.threshold_name;
  }
  return out;
}

std::vector<RasterCell> raster(int n, const std::vector<double>& p_grid,
                               const std::vector<std::optional<double>>& alpha_grid,
                               std::optional<double> energy_exponent) {
  std::vector<RasterCell> cells;
  for (const auto& alpha : alpha_grid) {
    for (double p : p_grid) {
      if (!(p > 1.0) || !(p < n)) continue;
      RasterCell cell;
      cell.n = n;
      cell.p = p;
      cell.alpha = alpha;
      cell.outcome = classify({n, p, alpha, energy_exponent});
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace plap
