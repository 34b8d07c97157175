#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vtlscuc/case_model.hpp"
#include "vtlscuc/milp.hpp"
#include "vtlscuc/scenario.hpp"

namespace vtlscuc {

class ScenarioCaseMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string idx2(const std::string& a, int t) {
  return "[" + a + "," + std::to_string(t) + "]";
}
inline std::string idx3(const std::string& a, int t, int s) {
  return "[" + a + "," + std::to_string(t) + "," + std::to_string(s) + "]";
}

inline double demand_at(const CaseFile& c, const Bus& bus, int t) {
  if (bus.load_profile_ref.empty()) return 0.0;
  const LoadProfile* p = c.find_load_profile(bus.load_profile_ref);
  return p ? p->demand_mw[t] : 0.0;
}

}  // namespace detail

// Builds the extensive-form MILP for one variant. First-stage commitment
// variables u,v are shared across scenarios; everything else carries an s
// index.
inline MilpModel build_model(const EffectiveCase& eff, const ScenarioSet& scen,
                             const CaseOptions& opts) {
  const CaseFile& c = eff.base;
  const int T = c.horizon;
  const int S = scen.count();
  if (S == 0) throw ScenarioCaseMismatch("empty scenario set");
  for (int s = 0; s < S; ++s)
    for (const auto& r : c.renewables) {
      auto it = scen.scenarios[s].find(r.id);
      if (it == scen.scenarios[s].end())
        throw ScenarioCaseMismatch("scenario " + std::to_string(s) +
                                   " missing renewable " + r.id);
      if (static_cast<int>(it->second.size()) != T)
        throw ScenarioCaseMismatch("profile length mismatch for " + r.id);
    }

  const double dt = opts.interval_hours;
  MilpModel m;
  auto& ix = m.index;
  ix.n_gens = static_cast<int>(c.thermal_gens.size());
  ix.n_buses = static_cast<int>(c.buses.size());
  ix.n_branches = static_cast<int>(c.branches.size());
  ix.n_renewables = static_cast<int>(c.renewables.size());
  ix.n_storages = eff.storages_active ? static_cast<int>(c.storages.size()) : 0;
  ix.n_vtl = eff.vtl_active ? static_cast<int>(c.vtl_pairs.size()) : 0;
  ix.horizon = T;
  ix.n_scenarios = S;

  std::map<std::string, int> bus_pos;
  for (int n = 0; n < ix.n_buses; ++n) bus_pos[c.buses[n].id] = n;
  std::map<std::string, int> storage_pos;
  for (std::size_t e = 0; e < c.storages.size(); ++e)
    storage_pos[c.storages[e].id] = static_cast<int>(e);

  // Commitment and startup (first stage).
  for (int g = 0; g < ix.n_gens; ++g) {
    const auto& gen = c.thermal_gens[g];
    for (int t = 0; t < T; ++t) {
      ix.u[{g, t}] = m.add_var("u" + detail::idx2(gen.id, t), 0, 1,
                               gen.cost_no_load_per_interval, true);
      ix.v[{g, t}] = m.add_var("v" + detail::idx2(gen.id, t), 0, 1,
                               gen.cost_startup, true);
    }
  }

  // Dispatch, angles, flows, curtailment (second stage).
  for (int s = 0; s < S; ++s) {
    double pi = scen.probabilities[s];
    for (int g = 0; g < ix.n_gens; ++g) {
      const auto& gen = c.thermal_gens[g];
      for (int t = 0; t < T; ++t)
        ix.p[{g, t, s}] =
            m.add_var("p" + detail::idx3(gen.id, t, s), 0, gen.p_max_mw,
                      gen.cost_linear_per_mwh * pi * dt);
    }
    for (int n = 0; n < ix.n_buses; ++n)
      for (int t = 0; t < T; ++t)
        ix.theta[{n, t, s}] =
            m.add_var("th" + detail::idx3(c.buses[n].id, t, s), -kInf, kInf, 0);
    for (int k = 0; k < ix.n_branches; ++k) {
      const auto& br = c.branches[k];
      for (int t = 0; t < T; ++t)
        ix.flow[{k, t, s}] = m.add_var("f" + detail::idx3(br.id, t, s),
                                       -br.flow_limit_mw, br.flow_limit_mw, 0);
    }
    for (int r = 0; r < ix.n_renewables; ++r) {
      const auto& unit = c.renewables[r];
      double rho = unit.kind == RenewableKind::Solar
                       ? opts.penalty_solar_per_mwh
                       : opts.penalty_wind_per_mwh;
      const auto& avail = scen.profile(s, unit.id);
      for (int t = 0; t < T; ++t)
        ix.curtail[{r, t, s}] = m.add_var("pc" + detail::idx3(unit.id, t, s), 0,
                                          avail[t], rho * pi * dt);
    }
    for (int e = 0; e < ix.n_storages; ++e) {
      const auto& es = c.storages[e];
      for (int t = 0; t < T; ++t) {
        ix.charge[{e, t, s}] = m.add_var("ec" + detail::idx3(es.id, t, s), 0,
                                         es.p_charge_max_mw, 0);
        ix.discharge[{e, t, s}] = m.add_var("ed" + detail::idx3(es.id, t, s), 0,
                                            es.p_discharge_max_mw, 0);
        double e_lo = es.e_min_mwh;
        if (t == T - 1 && es.terminal_energy_min_mwh)
          e_lo = std::max(e_lo, *es.terminal_energy_min_mwh);
        ix.energy[{e, t, s}] = m.add_var("E" + detail::idx3(es.id, t, s), e_lo,
                                         es.e_max_mwh, 0);
        ix.mode_charge[{e, t, s}] =
            m.add_var("uc" + detail::idx3(es.id, t, s), 0, 1, 0, true);
        ix.mode_discharge[{e, t, s}] =
            m.add_var("ud" + detail::idx3(es.id, t, s), 0, 1, 0, true);
      }
    }
  }

  // Startup logic: v_gt >= u_gt - u_{g,t-1}.
  for (int g = 0; g < ix.n_gens; ++g) {
    const auto& gen = c.thermal_gens[g];
    for (int t = 0; t < T; ++t) {
      std::vector<std::pair<VarId, double>> terms = {{ix.v[{g, t}], 1.0},
                                                     {ix.u[{g, t}], -1.0}};
      double lo = 0.0;
      if (t == 0)
        lo = -(gen.initial_committed ? 1.0 : 0.0);
      else
        terms.push_back({ix.u[{g, t - 1}], 1.0});
      m.add_row("uc_logic" + detail::idx2(gen.id, t), Family::UC,
                std::move(terms), lo, kInf);
    }
  }

  // Output limits tied to commitment.
  for (int s = 0; s < S; ++s)
    for (int g = 0; g < ix.n_gens; ++g) {
      const auto& gen = c.thermal_gens[g];
      for (int t = 0; t < T; ++t) {
        m.add_row("pmax" + detail::idx3(gen.id, t, s), Family::LIMIT,
                  {{ix.p[{g, t, s}], 1.0}, {ix.u[{g, t}], -gen.p_max_mw}},
                  -kInf, 0.0);
        if (gen.p_min_mw > 0)
          m.add_row("pmin" + detail::idx3(gen.id, t, s), Family::LIMIT,
                    {{ix.p[{g, t, s}], 1.0}, {ix.u[{g, t}], -gen.p_min_mw}},
                    0.0, kInf);
      }
    }

  // Ramping; rows are omitted when the ramp can never bind.
  for (int s = 0; s < S; ++s)
    for (int g = 0; g < ix.n_gens; ++g) {
      const auto& gen = c.thermal_gens[g];
      double ramp = gen.ramp_mw_per_interval;
      if (ramp >= gen.p_max_mw) continue;
      for (int t = 0; t < T; ++t) {
        if (t == 0) {
          if (!gen.initial_committed) continue;
          m.add_row("ramp" + detail::idx3(gen.id, t, s), Family::RAMP,
                    {{ix.p[{g, t, s}], 1.0}},
                    gen.initial_output_mw - ramp, gen.initial_output_mw + ramp);
        } else {
          m.add_row("ramp" + detail::idx3(gen.id, t, s), Family::RAMP,
                    {{ix.p[{g, t, s}], 1.0}, {ix.p[{g, t - 1, s}], -1.0}},
                    -ramp, ramp);
        }
      }
    }

  // DC flow: f_k = (base / x_k) * (theta_from - theta_to).
  for (int s = 0; s < S; ++s)
    for (int k = 0; k < ix.n_branches; ++k) {
      const auto& br = c.branches[k];
      double b = opts.mva_base / br.reactance_pu;
      int nf = bus_pos.at(br.from_bus), nt = bus_pos.at(br.to_bus);
      for (int t = 0; t < T; ++t)
        m.add_row("flow" + detail::idx3(br.id, t, s), Family::FLOW,
                  {{ix.flow[{k, t, s}], 1.0},
                   {ix.theta[{nf, t, s}], -b},
                   {ix.theta[{nt, t, s}], b}},
                  0.0, 0.0);
    }

  // Nodal balance; scenario availability folds into the right-hand side.
  for (int s = 0; s < S; ++s)
    for (int n = 0; n < ix.n_buses; ++n) {
      const auto& bus = c.buses[n];
      for (int t = 0; t < T; ++t) {
        std::vector<std::pair<VarId, double>> terms;
        double rhs = detail::demand_at(c, bus, t);
        for (int g = 0; g < ix.n_gens; ++g)
          if (c.thermal_gens[g].bus == bus.id)
            terms.push_back({ix.p[{g, t, s}], 1.0});
        for (int k = 0; k < ix.n_branches; ++k) {
          if (c.branches[k].to_bus == bus.id)
            terms.push_back({ix.flow[{k, t, s}], 1.0});
          if (c.branches[k].from_bus == bus.id)
            terms.push_back({ix.flow[{k, t, s}], -1.0});
        }
        for (int r = 0; r < ix.n_renewables; ++r)
          if (c.renewables[r].bus == bus.id) {
            // Delivered output is availability minus curtailment.
            rhs -= scen.profile(s, c.renewables[r].id)[t];
            terms.push_back({ix.curtail[{r, t, s}], -1.0});
          }
        for (int e = 0; e < ix.n_storages; ++e)
          if (c.storages[e].bus == bus.id) {
            terms.push_back({ix.discharge[{e, t, s}], 1.0});
            terms.push_back({ix.charge[{e, t, s}], -1.0});
          }
        ix.balance_row[{n, t, s}] =
            m.add_row("bal" + detail::idx3(bus.id, t, s), Family::BALANCE,
                      std::move(terms), rhs, rhs);
      }
    }

  // Storage mode exclusivity, rate limits, and the energy recursion.
  for (int s = 0; s < S; ++s)
    for (int e = 0; e < ix.n_storages; ++e) {
      const auto& es = c.storages[e];
      for (int t = 0; t < T; ++t) {
        m.add_row("es_mode" + detail::idx3(es.id, t, s), Family::SOC,
                  {{ix.mode_charge[{e, t, s}], 1.0},
                   {ix.mode_discharge[{e, t, s}], 1.0}},
                  -kInf, 1.0);
        m.add_row("es_cmax" + detail::idx3(es.id, t, s), Family::SOC,
                  {{ix.charge[{e, t, s}], 1.0},
                   {ix.mode_charge[{e, t, s}], -es.p_charge_max_mw}},
                  -kInf, 0.0);
        m.add_row("es_dmax" + detail::idx3(es.id, t, s), Family::SOC,
                  {{ix.discharge[{e, t, s}], 1.0},
                   {ix.mode_discharge[{e, t, s}], -es.p_discharge_max_mw}},
                  -kInf, 0.0);
        std::vector<std::pair<VarId, double>> rec = {
            {ix.energy[{e, t, s}], 1.0},
            {ix.charge[{e, t, s}], -es.eta_charge * dt},
            {ix.discharge[{e, t, s}], dt / es.eta_discharge}};
        double rhs = 0.0;
        if (t == 0)
          rhs = es.initial_energy_mwh;
        else
          rec.push_back({ix.energy[{e, t - 1, s}], -1.0});
        m.add_row("soc" + detail::idx3(es.id, t, s), Family::SOC,
                  std::move(rec), rhs, rhs);
      }
    }

  // VTL coupling: the pair may host at most one charger and one discharger.
  if (eff.vtl_active)
    for (int s = 0; s < S; ++s)
      for (std::size_t vt = 0; vt < c.vtl_pairs.size(); ++vt) {
        const auto& pair = c.vtl_pairs[vt];
        int e0 = storage_pos.at(pair.storage_ids[0]);
        int e1 = storage_pos.at(pair.storage_ids[1]);
        for (int t = 0; t < T; ++t) {
          m.add_row("vtl_c" + detail::idx3(pair.id, t, s), Family::VTL,
                    {{ix.mode_charge[{e0, t, s}], 1.0},
                     {ix.mode_charge[{e1, t, s}], 1.0}},
                    -kInf, 1.0);
          m.add_row("vtl_d" + detail::idx3(pair.id, t, s), Family::VTL,
                    {{ix.mode_discharge[{e0, t, s}], 1.0},
                     {ix.mode_discharge[{e1, t, s}], 1.0}},
                    -kInf, 1.0);
        }
      }

  // Reference angle.
  int ref = bus_pos.at(c.reference_bus());
  for (int s = 0; s < S; ++s)
    for (int t = 0; t < T; ++t)
      m.add_row("ref" + detail::idx3(c.buses[ref].id, t, s), Family::REF,
                {{ix.theta[{ref, t, s}], 1.0}}, 0.0, 0.0);

  return m;
}

// Recomputes the objective from raw solution values, independently of the
// solver's reported number.
inline ObjectiveBreakdown evaluate_breakdown(const Solution& sol,
                                             const EffectiveCase& eff,
                                             const ScenarioSet& scen,
                                             const CaseOptions& opts) {
  const CaseFile& c = eff.base;
  const int T = c.horizon;
  const int S = scen.count();
  ObjectiveBreakdown b;
  for (int g = 0; g < static_cast<int>(c.thermal_gens.size()); ++g) {
    const auto& gen = c.thermal_gens[g];
    for (int t = 0; t < T; ++t) {
      auto iu = sol.u.find({g, t});
      auto iv = sol.v.find({g, t});
      if (iu == sol.u.end() || iv == sol.v.end())
        throw DimensionMismatch("missing commitment value for " + gen.id);
      b.no_load += gen.cost_no_load_per_interval * iu->second;
      b.startup += gen.cost_startup * iv->second;
      for (int s = 0; s < S; ++s) {
        auto ip = sol.p.find({g, t, s});
        if (ip == sol.p.end())
          throw DimensionMismatch("missing dispatch value for " + gen.id);
        b.weighted_energy += gen.cost_linear_per_mwh * scen.probabilities[s] *
                             ip->second * opts.interval_hours;
      }
    }
  }
  for (int r = 0; r < static_cast<int>(c.renewables.size()); ++r) {
    const auto& unit = c.renewables[r];
    double rho = unit.kind == RenewableKind::Solar ? opts.penalty_solar_per_mwh
                                                   : opts.penalty_wind_per_mwh;
    for (int s = 0; s < S; ++s)
      for (int t = 0; t < T; ++t) {
        auto ic = sol.curtail.find({r, t, s});
        if (ic == sol.curtail.end())
          throw DimensionMismatch("missing curtailment value for " + unit.id);
        b.curtailment_penalty +=
            rho * scen.probabilities[s] * ic->second * opts.interval_hours;
      }
  }
  return b;
}

inline double evaluate_objective(const Solution& sol, const EffectiveCase& eff,
                                 const ScenarioSet& scen,
                                 const CaseOptions& opts) {
  return evaluate_breakdown(sol, eff, scen, opts).total();
}

struct FeasibilityReport {
  std::map<std::string, double> family_max;  // max row violation per family
  double bounds_max = 0.0;
  double integrality_max = 0.0;
  double soc_recursion_max = 0.0;
  bool vtl_exclusive_ok = true;
  bool commitment_logic_ok = true;
  double tol = 0.0;

  double worst_row() const {
    double w = 0;
    for (const auto& [f, v] : family_max) w = std::max(w, v);
    return w;
  }
  bool pass() const {
    return worst_row() <= tol && bounds_max <= tol && integrality_max <= tol &&
           soc_recursion_max <= 1e-9 && vtl_exclusive_ok && commitment_logic_ok;
  }
};

// Re-checks every constraint family from raw values. SOC recursion rows and
// VTL/commitment logic on rounded binaries get the stricter checks the
// solver contract promises.
inline FeasibilityReport check_solution_feasibility(const Solution& sol,
                                                    const MilpModel& model,
                                                    double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  FeasibilityReport rep;
  rep.tol = tol;
  if (sol.x.size() != model.vars.size())
    throw DimensionMismatch("solution/model variable count mismatch");

  for (std::size_t i = 0; i < model.vars.size(); ++i) {
    const auto& var = model.vars[i];
    double x = sol.x[i];
    rep.bounds_max = std::max({rep.bounds_max, var.lower - x, x - var.upper});
    if (var.is_binary)
      rep.integrality_max =
          std::max(rep.integrality_max, std::abs(x - std::round(x)));
  }

  for (const auto& row : model.rows) {
    double a = model.row_activity(row, sol.x);
    double viol = std::max({0.0, row.lower - a, a - row.upper});
    auto& fam = rep.family_max[to_string(row.family)];
    fam = std::max(fam, viol);
    if (row.family == Family::SOC && row.name.rfind("soc[", 0) == 0)
      rep.soc_recursion_max = std::max(rep.soc_recursion_max, viol);
    if (row.family == Family::VTL ||
        (row.family == Family::SOC && row.name.rfind("es_mode", 0) == 0)) {
      long sum = 0;
      for (const auto& [vid, coeff] : row.terms)
        sum += static_cast<long>(coeff * std::llround(sol.x[vid]));
      if (sum > 1) rep.vtl_exclusive_ok = false;
    }
    if (row.family == Family::UC) {
      double a_int = 0;
      for (const auto& [vid, coeff] : row.terms)
        a_int += coeff * std::llround(sol.x[vid]);
      if (a_int < row.lower - 1e-12) rep.commitment_logic_ok = false;
    }
  }
  return rep;
}

// Populates the structured views of a Solution from its raw vector.
inline void populate_solution_views(Solution& sol, const ModelIndex& ix) {
  sol.u.clear();
  sol.v.clear();
  sol.p.clear();
  sol.theta.clear();
  sol.flow.clear();
  sol.curtail.clear();
  sol.charge.clear();
  sol.discharge.clear();
  sol.energy.clear();
  sol.mode_charge.clear();
  sol.mode_discharge.clear();
  for (const auto& [k, vid] : ix.u) sol.u[k] = sol.x[vid];
  for (const auto& [k, vid] : ix.v) sol.v[k] = sol.x[vid];
  for (const auto& [k, vid] : ix.p) sol.p[k] = sol.x[vid];
  for (const auto& [k, vid] : ix.theta) sol.theta[k] = sol.x[vid];
  for (const auto& [k, vid] : ix.flow) sol.flow[k] = sol.x[vid];
  for (const auto& [k, vid] : ix.curtail) sol.curtail[k] = sol.x[vid];
  for (const auto& [k, vid] : ix.charge) sol.charge[k] = sol.x[vid];
  for (const auto& [k, vid] : ix.discharge) sol.discharge[k] = sol.x[vid];
  for (const auto& [k, vid] : ix.energy) sol.energy[k] = sol.x[vid];
  for (const auto& [k, vid] : ix.mode_charge) sol.mode_charge[k] = sol.x[vid];
  for (const auto& [k, vid] : ix.mode_discharge)
    sol.mode_discharge[k] = sol.x[vid];
}

}  // namespace vtlscuc
