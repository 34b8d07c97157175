#pragma once

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "vtlscuc/builder.hpp"
#include "vtlscuc/case_model.hpp"
#include "vtlscuc/scenario.hpp"
#include "vtlscuc/solver.hpp"

namespace vtlscuc {

enum class LmpConvention { Expected, Unweighted };

inline std::string to_string(LmpConvention c) {
  return c == LmpConvention::Expected ? "expected" : "unweighted";
}

inline LmpConvention parse_lmp_convention(const std::string& s) {
  if (s == "expected") return LmpConvention::Expected;
  if (s == "unweighted") return LmpConvention::Unweighted;
  throw std::invalid_argument("unknown lmp convention: " + s);
}

struct CurtailmentTotal {
  double solar_mwh = 0.0;
  double wind_mwh = 0.0;
  double total() const { return solar_mwh + wind_mwh; }
};

struct MetricsReport {
  std::string variant;
  std::string case_name;
  int scenario_count = 0;
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  ObjectiveBreakdown breakdown;
  double load_payment_expected = 0.0;
  double load_payment_unweighted = 0.0;
  std::vector<int> congested_branches;    // per scenario, distinct branches
  std::vector<int> congested_line_hours;  // per scenario, branch-hour count
  std::vector<CurtailmentTotal> curtailment;  // per scenario
};

class BaselineMissing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MixedProvenance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double load_payment(const LmpSurface& lmp, const CaseFile& c,
                           const ScenarioSet& scen, LmpConvention convention) {
  double total = 0.0;
  for (const auto& [key, price] : lmp.price) {
    auto [n, t, s] = key;
    const Bus& bus = c.buses.at(n);
    double d = detail::demand_at(c, bus, t);
    double w = convention == LmpConvention::Expected ? scen.probabilities.at(s)
                                                     : 1.0;
    total += w * d * price;
  }
  return total;
}

// Distinct branches that touch their limit at least once in the horizon,
// per scenario.
inline std::vector<int> congestion_count(const Solution& sol,
                                         const EffectiveCase& eff,
                                         double eps) {
  if (!(eps > 0 && eps <= 0.01))
    throw std::invalid_argument("congestion eps must be in (0, 0.01]");
  const int S = sol.flow.empty() ? 0 : 1 + std::get<2>(sol.flow.rbegin()->first);
  std::vector<std::set<int>> hit(std::max(S, 1));
  for (const auto& [key, f] : sol.flow) {
    auto [k, t, s] = key;
    (void)t;
    double limit = eff.base.branches.at(k).flow_limit_mw;
    if (std::abs(f) >= (1.0 - eps) * limit) hit[s].insert(k);
  }
  std::vector<int> counts;
  for (const auto& set : hit) counts.push_back(static_cast<int>(set.size()));
  return counts;
}

// Alternate statistic: congested branch-hours per scenario.
inline std::vector<int> congestion_line_hours(const Solution& sol,
                                              const EffectiveCase& eff,
                                              double eps) {
  if (!(eps > 0 && eps <= 0.01))
    throw std::invalid_argument("congestion eps must be in (0, 0.01]");
  const int S = sol.flow.empty() ? 0 : 1 + std::get<2>(sol.flow.rbegin()->first);
  std::vector<int> counts(std::max(S, 1), 0);
  for (const auto& [key, f] : sol.flow) {
    auto [k, t, s] = key;
    (void)t;
    double limit = eff.base.branches.at(k).flow_limit_mw;
    if (std::abs(f) >= (1.0 - eps) * limit) ++counts[s];
  }
  return counts;
}

inline std::vector<CurtailmentTotal> curtailment_totals(
    const Solution& sol, const EffectiveCase& eff, const CaseOptions& opts) {
  const int S = sol.curtail.empty()
                    ? 0
                    : 1 + std::get<2>(sol.curtail.rbegin()->first);
  std::vector<CurtailmentTotal> totals(std::max(S, 1));
  for (const auto& [key, mw] : sol.curtail) {
    auto [r, t, s] = key;
    (void)t;
    double mwh = mw * opts.interval_hours;
    if (eff.base.renewables.at(r).kind == RenewableKind::Solar)
      totals[s].solar_mwh += mwh;
    else
      totals[s].wind_mwh += mwh;
  }
  return totals;
}

struct ComparisonCell {
  double value = 0.0;   // percent of baseline, or absolute when flagged
  bool absolute = false;  // baseline metric was zero
  bool available = true;
};

struct ComparisonTable {
  std::string baseline;
  std::vector<std::string> variants;
  // metric name -> one cell per variant (ordered as `variants`)
  std::map<std::string, std::vector<ComparisonCell>> rows;
};

namespace detail {

inline ComparisonCell relative_cell(double value, double baseline) {
  ComparisonCell cell;
  if (baseline == 0.0) {
    cell.value = value;
    cell.absolute = true;
  } else {
    cell.value = 100.0 * value / baseline;
  }
  return cell;
}

}  // namespace detail

inline ComparisonTable compare_variants(const std::vector<MetricsReport>& reports,
                                        const std::string& baseline) {
  const MetricsReport* base = nullptr;
  for (const auto& r : reports)
    if (r.variant == baseline) base = &r;
  if (!base) throw BaselineMissing("baseline variant not present: " + baseline);
  for (const auto& r : reports)
    if (r.case_name != base->case_name ||
        r.scenario_count != base->scenario_count)
      throw MixedProvenance("reports mix cases or scenario sets");

  ComparisonTable table;
  table.baseline = baseline;
  for (const auto& r : reports) table.variants.push_back(r.variant);

  auto add_row = [&](const std::string& name, auto getter) {
    std::vector<ComparisonCell> cells;
    double b = getter(*base);
    for (const auto& r : reports) {
      if (r.status == SolveStatus::Infeasible || r.status == SolveStatus::Error) {
        ComparisonCell cell;
        cell.available = false;
        cells.push_back(cell);
      } else {
        cells.push_back(detail::relative_cell(getter(r), b));
      }
    }
    table.rows[name] = std::move(cells);
  };

  add_row("operational_cost", [](const MetricsReport& r) { return r.objective; });
  add_row("load_payment_expected",
          [](const MetricsReport& r) { return r.load_payment_expected; });
  add_row("load_payment_unweighted",
          [](const MetricsReport& r) { return r.load_payment_unweighted; });
  for (int s = 0; s < base->scenario_count; ++s) {
    add_row("congestion_s" + std::to_string(s + 1), [s](const MetricsReport& r) {
      return s < static_cast<int>(r.congested_branches.size())
                 ? static_cast<double>(r.congested_branches[s])
                 : 0.0;
    });
    add_row("curtailment_s" + std::to_string(s + 1), [s](const MetricsReport& r) {
      return s < static_cast<int>(r.curtailment.size())
                 ? r.curtailment[s].total()
                 : 0.0;
    });
  }
  return table;
}

struct StochasticDiagnostics {
  double ws = 0.0;    // wait-and-see value
  double rp = 0.0;    // stochastic (recourse) optimum
  double eev = 0.0;   // expected result of the expected-value solution
  double vss = 0.0;   // eev - rp
  double evpi = 0.0;  // rp - ws
  bool eev_feasible = true;
  std::vector<double> per_scenario_deterministic;
};

class EEVInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline StochasticDiagnostics stochastic_diagnostics(
    const CaseFile& c, const ScenarioSet& scen, ModelVariant variant,
    const SolverOptions& solver_opts) {
  EffectiveCase eff = apply_variant(c, variant);
  StochasticDiagnostics d;

  // RP: the stochastic optimum.
  MilpModel stoch = build_model(eff, scen, c.options);
  Solution rp_sol = solve_milp(stoch, solver_opts);
  if (!rp_sol.feasible())
    throw NumericFailure("stochastic problem not solvable for diagnostics");
  d.rp = rp_sol.objective;

  // WS: probability-weighted per-scenario deterministic optima.
  for (int s = 0; s < scen.count(); ++s) {
    ScenarioSet single;
    single.scenarios = {scen.scenarios[s]};
    single.probabilities = {1.0};
    MilpModel det = build_model(eff, single, c.options);
    Solution det_sol = solve_milp(det, solver_opts);
    if (!det_sol.feasible())
      throw NumericFailure("deterministic scenario solve failed");
    d.per_scenario_deterministic.push_back(det_sol.objective);
    d.ws += scen.probabilities[s] * det_sol.objective;
  }

  // EEV: commit on the expected-value profile, then price that commitment
  // against the full scenario set.
  ScenarioSet expected;
  expected.scenarios = {expected_profiles(scen, c)};
  expected.probabilities = {1.0};
  MilpModel ev_model = build_model(eff, expected, c.options);
  Solution ev_sol = solve_milp(ev_model, solver_opts);
  if (!ev_sol.feasible())
    throw NumericFailure("expected-value scenario solve failed");

  std::map<VarId, double> fix;
  for (const auto& [key, vid] : stoch.index.u) fix[vid] = ev_sol.u.at(key);
  for (const auto& [key, vid] : stoch.index.v) fix[vid] = ev_sol.v.at(key);
  Solution eev_sol = solve_milp(stoch, solver_opts, fix);
  if (!eev_sol.feasible()) {
    d.eev_feasible = false;
    d.eev = kInf;
    d.vss = kInf;
  } else {
    d.eev = eev_sol.objective;
    d.vss = d.eev - d.rp;
  }
  d.evpi = d.rp - d.ws;
  return d;
}

}  // namespace vtlscuc
