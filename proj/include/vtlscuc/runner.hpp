#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "vtlscuc/builder.hpp"
#include "vtlscuc/case_model.hpp"
#include "vtlscuc/metrics.hpp"
#include "vtlscuc/scenario.hpp"
#include "vtlscuc/solver.hpp"

namespace vtlscuc {

struct RunResult {
  EffectiveCase eff;
  MilpModel model;
  Solution sol;
  DualSurface duals;
  LmpSurface lmp;
  bool has_lmp = false;
};

// Full pipeline for one variant: validate, apply, build, solve, and (when
// feasible) the fixed-binary LP resolve for prices.
inline RunResult run_variant(const CaseFile& c, ModelVariant variant,
                             const ScenarioSet& scen,
                             const SolverOptions& solver_opts,
                             bool want_lmp = true) {
  auto case_report = validate_case(c);
  if (!case_report.empty())
    throw std::invalid_argument("invalid case:\n" + case_report.summary());
  auto scen_report = validate_scenario_set(scen, c);
  if (!scen_report.empty())
    throw std::invalid_argument("invalid scenario set:\n" +
                                scen_report.summary());

  RunResult out;
  out.eff = apply_variant(c, variant);
  out.model = build_model(out.eff, scen, c.options);
  out.sol = solve_milp(out.model, solver_opts);
  if (out.sol.feasible()) {
    out.sol.breakdown = evaluate_breakdown(out.sol, out.eff, scen, c.options);
    if (want_lmp) {
      std::map<VarId, double> fix;
      for (std::size_t i = 0; i < out.model.vars.size(); ++i)
        if (out.model.vars[i].is_binary)
          fix[static_cast<VarId>(i)] = out.sol.x[i];
      auto [lp_sol, duals] = solve_lp_fixed(out.model, fix, solver_opts);
      (void)lp_sol;
      out.duals = std::move(duals);
      out.lmp = extract_lmp(out.duals, scen);
      out.has_lmp = true;
    }
  }
  return out;
}

inline MetricsReport compute_metrics(const RunResult& run, const CaseFile& c,
                                     const ScenarioSet& scen) {
  MetricsReport r;
  r.variant = to_string(run.eff.variant);
  r.case_name = c.name;
  r.scenario_count = scen.count();
  r.status = run.sol.status;
  if (!run.sol.feasible()) return r;
  r.objective = run.sol.objective;
  r.breakdown = run.sol.breakdown;
  if (run.has_lmp) {
    r.load_payment_expected =
        load_payment(run.lmp, run.eff.base, scen, LmpConvention::Expected);
    r.load_payment_unweighted =
        load_payment(run.lmp, run.eff.base, scen, LmpConvention::Unweighted);
  }
  double eps = c.options.congestion_epsilon;
  r.congested_branches = congestion_count(run.sol, run.eff, eps);
  r.congested_line_hours = congestion_line_hours(run.sol, run.eff, eps);
  r.curtailment = curtailment_totals(run.sol, run.eff, c.options);
  return r;
}

}  // namespace vtlscuc
