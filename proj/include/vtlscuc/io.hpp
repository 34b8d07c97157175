#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vtlscuc/case_model.hpp"
#include "vtlscuc/metrics.hpp"
#include "vtlscuc/milp.hpp"
#include "vtlscuc/scenario.hpp"

namespace vtlscuc {

using nlohmann::json;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Strict mode: unknown fields are format drift, not extensions.
inline void check_keys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& context) {
  if (!obj.is_object()) throw SchemaError(context + ": expected object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw SchemaError(context + ": unknown field '" + it.key() + "'");
}

template <typename T>
T get_req(const json& obj, const std::string& key, const std::string& context) {
  if (!obj.contains(key))
    throw SchemaError(context + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(context + ": bad field '" + key + "': " + e.what());
  }
}

template <typename T>
T get_opt(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Case files (schema vtl-scuc/1)

inline json case_to_json(const CaseFile& c) {
  json j;
  j["schema"] = c.schema;
  j["name"] = c.name;
  j["horizon"] = c.horizon;
  j["buses"] = json::array();
  for (const auto& b : c.buses) {
    json jb{{"id", b.id}};
    if (!b.load_profile_ref.empty()) jb["load_profile_ref"] = b.load_profile_ref;
    j["buses"].push_back(jb);
  }
  j["branches"] = json::array();
  for (const auto& k : c.branches) {
    json jk{{"id", k.id},
            {"from_bus", k.from_bus},
            {"to_bus", k.to_bus},
            {"reactance_pu", k.reactance_pu},
            {"flow_limit_mw", k.flow_limit_mw}};
    if (k.is_candidate_pt) jk["is_candidate_pt"] = true;
    j["branches"].push_back(jk);
  }
  j["thermal_gens"] = json::array();
  for (const auto& g : c.thermal_gens) {
    j["thermal_gens"].push_back(
        {{"id", g.id},
         {"bus", g.bus},
         {"p_min_mw", g.p_min_mw},
         {"p_max_mw", g.p_max_mw},
         {"ramp_mw_per_interval", g.ramp_mw_per_interval},
         {"cost_linear_per_mwh", g.cost_linear_per_mwh},
         {"cost_no_load_per_interval", g.cost_no_load_per_interval},
         {"cost_startup", g.cost_startup},
         {"initial_status", g.initial_committed ? "committed" : "offline"},
         {"initial_output_mw", g.initial_output_mw}});
  }
  j["renewables"] = json::array();
  for (const auto& r : c.renewables)
    j["renewables"].push_back({{"id", r.id},
                               {"bus", r.bus},
                               {"kind", to_string(r.kind)},
                               {"base_profile_mw", r.base_profile_mw}});
  j["storages"] = json::array();
  for (const auto& e : c.storages) {
    json je{{"id", e.id},
            {"bus", e.bus},
            {"e_min_mwh", e.e_min_mwh},
            {"e_max_mwh", e.e_max_mwh},
            {"p_charge_max_mw", e.p_charge_max_mw},
            {"p_discharge_max_mw", e.p_discharge_max_mw},
            {"eta_charge", e.eta_charge},
            {"eta_discharge", e.eta_discharge},
            {"initial_energy_mwh", e.initial_energy_mwh}};
    if (e.terminal_energy_min_mwh)
      je["terminal_energy_min_mwh"] = *e.terminal_energy_min_mwh;
    j["storages"].push_back(je);
  }
  j["vtl_pairs"] = json::array();
  for (const auto& vt : c.vtl_pairs) {
    json jv{{"id", vt.id}, {"storage_ids", vt.storage_ids}};
    if (vt.spanned_branch) jv["spanned_branch"] = *vt.spanned_branch;
    j["vtl_pairs"].push_back(jv);
  }
  j["load_profiles"] = json::array();
  for (const auto& p : c.load_profiles)
    j["load_profiles"].push_back(
        {{"id", p.id}, {"bus", p.bus}, {"demand_mw", p.demand_mw}});
  j["options"] = {{"interval_hours", c.options.interval_hours},
                  {"penalty_solar_per_mwh", c.options.penalty_solar_per_mwh},
                  {"penalty_wind_per_mwh", c.options.penalty_wind_per_mwh},
                  {"reference_bus", c.options.reference_bus},
                  {"congestion_epsilon", c.options.congestion_epsilon},
                  {"mva_base", c.options.mva_base}};
  return j;
}

inline CaseFile case_from_json(const json& j) {
  detail::check_keys(j,
                     {"schema", "name", "horizon", "buses", "branches",
                      "thermal_gens", "renewables", "storages", "vtl_pairs",
                      "load_profiles", "options"},
                     "case");
  CaseFile c;
  c.schema = detail::get_req<std::string>(j, "schema", "case");
  if (c.schema != "vtl-scuc/1")
    throw SchemaError("case: unsupported schema " + c.schema);
  c.name = detail::get_opt<std::string>(j, "name", "");
  c.horizon = detail::get_req<int>(j, "horizon", "case");
  for (const auto& jb : detail::get_opt<json>(j, "buses", json::array())) {
    detail::check_keys(jb, {"id", "load_profile_ref"}, "bus");
    Bus b;
    b.id = detail::get_req<std::string>(jb, "id", "bus");
    b.load_profile_ref = detail::get_opt<std::string>(jb, "load_profile_ref", "");
    c.buses.push_back(b);
  }
  for (const auto& jk : detail::get_opt<json>(j, "branches", json::array())) {
    detail::check_keys(jk,
                       {"id", "from_bus", "to_bus", "reactance_pu",
                        "flow_limit_mw", "is_candidate_pt"},
                       "branch");
    Branch k;
    k.id = detail::get_req<std::string>(jk, "id", "branch");
    k.from_bus = detail::get_req<std::string>(jk, "from_bus", "branch");
    k.to_bus = detail::get_req<std::string>(jk, "to_bus", "branch");
    k.reactance_pu = detail::get_req<double>(jk, "reactance_pu", "branch");
    k.flow_limit_mw = detail::get_req<double>(jk, "flow_limit_mw", "branch");
    k.is_candidate_pt = detail::get_opt<bool>(jk, "is_candidate_pt", false);
    c.branches.push_back(k);
  }
  for (const auto& jg : detail::get_opt<json>(j, "thermal_gens", json::array())) {
    detail::check_keys(jg,
                       {"id", "bus", "p_min_mw", "p_max_mw",
                        "ramp_mw_per_interval", "cost_linear_per_mwh",
                        "cost_no_load_per_interval", "cost_startup",
                        "initial_status", "initial_output_mw"},
                       "thermal_gen");
    ThermalGen g;
    g.id = detail::get_req<std::string>(jg, "id", "thermal_gen");
    g.bus = detail::get_req<std::string>(jg, "bus", "thermal_gen");
    g.p_min_mw = detail::get_opt<double>(jg, "p_min_mw", 0.0);
    g.p_max_mw = detail::get_req<double>(jg, "p_max_mw", "thermal_gen");
    g.ramp_mw_per_interval =
        detail::get_opt<double>(jg, "ramp_mw_per_interval", g.p_max_mw);
    g.cost_linear_per_mwh =
        detail::get_req<double>(jg, "cost_linear_per_mwh", "thermal_gen");
    g.cost_no_load_per_interval =
        detail::get_opt<double>(jg, "cost_no_load_per_interval", 0.0);
    g.cost_startup = detail::get_opt<double>(jg, "cost_startup", 0.0);
    std::string status =
        detail::get_opt<std::string>(jg, "initial_status", "offline");
    if (status != "committed" && status != "offline")
      throw SchemaError("thermal_gen: initial_status must be committed|offline");
    g.initial_committed = status == "committed";
    g.initial_output_mw = detail::get_opt<double>(jg, "initial_output_mw", 0.0);
    c.thermal_gens.push_back(g);
  }
  for (const auto& jr : detail::get_opt<json>(j, "renewables", json::array())) {
    detail::check_keys(jr, {"id", "bus", "kind", "base_profile_mw"},
                       "renewable");
    RenewableUnit r;
    r.id = detail::get_req<std::string>(jr, "id", "renewable");
    r.bus = detail::get_req<std::string>(jr, "bus", "renewable");
    std::string kind = detail::get_req<std::string>(jr, "kind", "renewable");
    if (kind == "solar")
      r.kind = RenewableKind::Solar;
    else if (kind == "wind")
      r.kind = RenewableKind::Wind;
    else
      throw SchemaError("renewable: kind must be solar|wind");
    r.base_profile_mw =
        detail::get_req<std::vector<double>>(jr, "base_profile_mw", "renewable");
    c.renewables.push_back(r);
  }
  for (const auto& je : detail::get_opt<json>(j, "storages", json::array())) {
    detail::check_keys(je,
                       {"id", "bus", "e_min_mwh", "e_max_mwh", "p_charge_max_mw",
                        "p_discharge_max_mw", "eta_charge", "eta_discharge",
                        "initial_energy_mwh", "terminal_energy_min_mwh"},
                       "storage");
    StorageUnit e;
    e.id = detail::get_req<std::string>(je, "id", "storage");
    e.bus = detail::get_req<std::string>(je, "bus", "storage");
    e.e_min_mwh = detail::get_opt<double>(je, "e_min_mwh", 0.0);
    e.e_max_mwh = detail::get_req<double>(je, "e_max_mwh", "storage");
    e.p_charge_max_mw = detail::get_req<double>(je, "p_charge_max_mw", "storage");
    e.p_discharge_max_mw =
        detail::get_req<double>(je, "p_discharge_max_mw", "storage");
    e.eta_charge = detail::get_opt<double>(je, "eta_charge", 1.0);
    e.eta_discharge = detail::get_opt<double>(je, "eta_discharge", 1.0);
    e.initial_energy_mwh = detail::get_opt<double>(je, "initial_energy_mwh", 0.0);
    if (je.contains("terminal_energy_min_mwh"))
      e.terminal_energy_min_mwh = je["terminal_energy_min_mwh"].get<double>();
    c.storages.push_back(e);
  }
  for (const auto& jv : detail::get_opt<json>(j, "vtl_pairs", json::array())) {
    detail::check_keys(jv, {"id", "storage_ids", "spanned_branch"}, "vtl_pair");
    VtlPair vt;
    vt.id = detail::get_req<std::string>(jv, "id", "vtl_pair");
    vt.storage_ids =
        detail::get_req<std::vector<std::string>>(jv, "storage_ids", "vtl_pair");
    if (jv.contains("spanned_branch"))
      vt.spanned_branch = jv["spanned_branch"].get<std::string>();
    c.vtl_pairs.push_back(vt);
  }
  for (const auto& jp : detail::get_opt<json>(j, "load_profiles", json::array())) {
    detail::check_keys(jp, {"id", "bus", "demand_mw"}, "load_profile");
    LoadProfile p;
    p.id = detail::get_req<std::string>(jp, "id", "load_profile");
    p.bus = detail::get_req<std::string>(jp, "bus", "load_profile");
    p.demand_mw =
        detail::get_req<std::vector<double>>(jp, "demand_mw", "load_profile");
    c.load_profiles.push_back(p);
  }
  if (j.contains("options")) {
    const auto& jo = j["options"];
    detail::check_keys(jo,
                       {"interval_hours", "penalty_solar_per_mwh",
                        "penalty_wind_per_mwh", "reference_bus",
                        "congestion_epsilon", "mva_base"},
                       "options");
    c.options.interval_hours = detail::get_opt<double>(jo, "interval_hours", 1.0);
    c.options.penalty_solar_per_mwh =
        detail::get_opt<double>(jo, "penalty_solar_per_mwh", 500.0);
    c.options.penalty_wind_per_mwh =
        detail::get_opt<double>(jo, "penalty_wind_per_mwh", 500.0);
    c.options.reference_bus = detail::get_opt<std::string>(jo, "reference_bus", "");
    c.options.congestion_epsilon =
        detail::get_opt<double>(jo, "congestion_epsilon", 1e-4);
    c.options.mva_base = detail::get_opt<double>(jo, "mva_base", 100.0);
  }
  return c;
}

inline CaseFile load_case(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(detail::read_file(path));
  } catch (const json::exception& e) {
    throw SchemaError("case file " + path.string() + ": " + e.what());
  }
  return case_from_json(j);
}

inline void save_case(const CaseFile& c, const std::filesystem::path& path) {
  detail::atomic_write(path, case_to_json(c).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Scenario files (schema vtl-scuc-scen/1)

inline json scenario_set_to_json(const ScenarioSet& set) {
  json j;
  j["schema"] = "vtl-scuc-scen/1";
  j["probabilities"] = set.probabilities;
  j["scenarios"] = json::array();
  for (const auto& s : set.scenarios) {
    json js = json::object();
    for (const auto& [unit, profile] : s) js[unit] = profile;
    j["scenarios"].push_back(js);
  }
  json prov{{"generated", set.generated}};
  if (set.generated) {
    prov["seed"] = set.seed;
    prov["schedule"] = {{"solar", set.schedule.solar},
                       {"wind", set.schedule.wind}};
  }
  j["provenance"] = prov;
  return j;
}

inline ScenarioSet scenario_set_from_json(const json& j) {
  detail::check_keys(j, {"schema", "probabilities", "scenarios", "provenance"},
                     "scenario file");
  auto schema = detail::get_req<std::string>(j, "schema", "scenario file");
  if (schema != "vtl-scuc-scen/1")
    throw SchemaError("scenario file: unsupported schema " + schema);
  ScenarioSet set;
  set.probabilities =
      detail::get_req<std::vector<double>>(j, "probabilities", "scenario file");
  for (const auto& js : detail::get_req<json>(j, "scenarios", "scenario file")) {
    std::map<std::string, std::vector<double>> s;
    for (auto it = js.begin(); it != js.end(); ++it)
      s[it.key()] = it.value().get<std::vector<double>>();
    set.scenarios.push_back(std::move(s));
  }
  if (j.contains("provenance")) {
    const auto& jp = j["provenance"];
    detail::check_keys(jp, {"generated", "seed", "schedule"}, "provenance");
    set.generated = detail::get_opt<bool>(jp, "generated", false);
    set.seed = detail::get_opt<std::uint64_t>(jp, "seed", 0);
    if (jp.contains("schedule")) {
      detail::check_keys(jp["schedule"], {"solar", "wind"}, "schedule");
      set.schedule.solar =
          detail::get_opt<std::vector<double>>(jp["schedule"], "solar", {});
      set.schedule.wind =
          detail::get_opt<std::vector<double>>(jp["schedule"], "wind", {});
    }
  }
  return set;
}

inline ScenarioSet load_scenario_set(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(detail::read_file(path));
  } catch (const json::exception& e) {
    throw SchemaError("scenario file " + path.string() + ": " + e.what());
  }
  return scenario_set_from_json(j);
}

inline void save_scenario_set(const ScenarioSet& set,
                              const std::filesystem::path& path) {
  detail::atomic_write(path, scenario_set_to_json(set).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Solution files (schema vtl-scuc-sol/1)

namespace detail {

template <typename Map>
json series3(const Map& values, int count, int horizon, int scenarios,
             const std::vector<std::string>& ids) {
  json out = json::array();
  for (int s = 0; s < scenarios; ++s) {
    json js = json::object();
    for (int i = 0; i < count; ++i) {
      std::vector<double> v(horizon, 0.0);
      for (int t = 0; t < horizon; ++t) {
        auto it = values.find({i, t, s});
        if (it != values.end()) v[t] = it->second;
      }
      js[ids[i]] = v;
    }
    out.push_back(js);
  }
  return out;
}

}  // namespace detail

inline json solution_to_json(const Solution& sol, const EffectiveCase& eff,
                             const LmpSurface* lmp = nullptr) {
  const CaseFile& c = eff.base;
  const int T = c.horizon;
  const int S = sol.p.empty() ? 0 : 1 + std::get<2>(sol.p.rbegin()->first);
  json j;
  j["schema"] = "vtl-scuc-sol/1";
  j["case_name"] = c.name;
  j["variant"] = to_string(eff.variant);
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  j["mip_gap"] = sol.mip_gap;
  j["breakdown"] = {{"no_load", sol.breakdown.no_load},
                    {"startup", sol.breakdown.startup},
                    {"weighted_energy", sol.breakdown.weighted_energy},
                    {"curtailment_penalty", sol.breakdown.curtailment_penalty}};

  std::vector<std::string> gen_ids, bus_ids, branch_ids, ren_ids, es_ids;
  for (const auto& g : c.thermal_gens) gen_ids.push_back(g.id);
  for (const auto& b : c.buses) bus_ids.push_back(b.id);
  for (const auto& k : c.branches) branch_ids.push_back(k.id);
  for (const auto& r : c.renewables) ren_ids.push_back(r.id);
  for (const auto& e : c.storages) es_ids.push_back(e.id);

  if (sol.u.empty()) return j;  // no incumbent: header only

  json commitment = json::object(), startup = json::object();
  for (std::size_t g = 0; g < gen_ids.size(); ++g) {
    std::vector<int> uv(T, 0), vv(T, 0);
    for (int t = 0; t < T; ++t) {
      uv[t] = static_cast<int>(std::llround(sol.u.at({static_cast<int>(g), t})));
      vv[t] = static_cast<int>(std::llround(sol.v.at({static_cast<int>(g), t})));
    }
    commitment[gen_ids[g]] = uv;
    startup[gen_ids[g]] = vv;
  }
  j["commitment"] = commitment;
  j["startup"] = startup;
  j["dispatch"] = detail::series3(sol.p, gen_ids.size(), T, S, gen_ids);
  j["angles"] = detail::series3(sol.theta, bus_ids.size(), T, S, bus_ids);
  j["flows"] = detail::series3(sol.flow, branch_ids.size(), T, S, branch_ids);
  j["curtailment"] = detail::series3(sol.curtail, ren_ids.size(), T, S, ren_ids);
  if (eff.storages_active) {
    j["storage"] = {
        {"charge", detail::series3(sol.charge, es_ids.size(), T, S, es_ids)},
        {"discharge",
         detail::series3(sol.discharge, es_ids.size(), T, S, es_ids)},
        {"energy", detail::series3(sol.energy, es_ids.size(), T, S, es_ids)},
        {"mode_charge",
         detail::series3(sol.mode_charge, es_ids.size(), T, S, es_ids)},
        {"mode_discharge",
         detail::series3(sol.mode_discharge, es_ids.size(), T, S, es_ids)}};
  }
  if (lmp) j["lmp"] = detail::series3(lmp->price, bus_ids.size(), T, S, bus_ids);
  return j;
}

struct LoadedSolution {
  Solution sol;  // structured views only; raw vector not persisted
  std::string variant;
  std::string case_name;
  LmpSurface lmp;
  bool has_lmp = false;
};

inline LoadedSolution solution_from_json(const json& j, const CaseFile& c) {
  detail::check_keys(j,
                     {"schema", "case_name", "variant", "status", "objective",
                      "mip_gap", "breakdown", "commitment", "startup",
                      "dispatch", "angles", "flows", "curtailment", "storage",
                      "lmp"},
                     "solution file");
  auto schema = detail::get_req<std::string>(j, "schema", "solution file");
  if (schema != "vtl-scuc-sol/1")
    throw SchemaError("solution file: unsupported schema " + schema);
  LoadedSolution out;
  out.case_name = detail::get_opt<std::string>(j, "case_name", "");
  out.variant = detail::get_req<std::string>(j, "variant", "solution file");
  Solution& sol = out.sol;
  auto status = detail::get_req<std::string>(j, "status", "solution file");
  sol.status = status == "optimal"      ? SolveStatus::Optimal
               : status == "feasible"   ? SolveStatus::Feasible
               : status == "infeasible" ? SolveStatus::Infeasible
               : status == "time_limit" ? SolveStatus::TimeLimit
                                        : SolveStatus::Error;
  sol.objective = detail::get_opt<double>(j, "objective", 0.0);
  sol.mip_gap = detail::get_opt<double>(j, "mip_gap", 0.0);
  if (j.contains("breakdown")) {
    const auto& jb = j["breakdown"];
    sol.breakdown.no_load = detail::get_opt<double>(jb, "no_load", 0.0);
    sol.breakdown.startup = detail::get_opt<double>(jb, "startup", 0.0);
    sol.breakdown.weighted_energy =
        detail::get_opt<double>(jb, "weighted_energy", 0.0);
    sol.breakdown.curtailment_penalty =
        detail::get_opt<double>(jb, "curtailment_penalty", 0.0);
  }

  auto pos_of = [](const std::vector<std::string>& ids, const std::string& id) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return static_cast<int>(i);
    throw SchemaError("solution file: unknown entity id " + id);
  };
  std::vector<std::string> gen_ids, bus_ids, branch_ids, ren_ids, es_ids;
  for (const auto& g : c.thermal_gens) gen_ids.push_back(g.id);
  for (const auto& b : c.buses) bus_ids.push_back(b.id);
  for (const auto& k : c.branches) branch_ids.push_back(k.id);
  for (const auto& r : c.renewables) ren_ids.push_back(r.id);
  for (const auto& e : c.storages) es_ids.push_back(e.id);

  auto read2 = [&](const json& src, const std::vector<std::string>& ids,
                   std::map<std::pair<int, int>, double>& dst) {
    for (auto it = src.begin(); it != src.end(); ++it) {
      int i = pos_of(ids, it.key());
      auto v = it.value().get<std::vector<double>>();
      for (std::size_t t = 0; t < v.size(); ++t)
        dst[{i, static_cast<int>(t)}] = v[t];
    }
  };
  auto read3 = [&](const json& src, const std::vector<std::string>& ids,
                   std::map<std::tuple<int, int, int>, double>& dst) {
    int s = 0;
    for (const auto& js : src) {
      for (auto it = js.begin(); it != js.end(); ++it) {
        int i = pos_of(ids, it.key());
        auto v = it.value().get<std::vector<double>>();
        for (std::size_t t = 0; t < v.size(); ++t)
          dst[{i, static_cast<int>(t), s}] = v[t];
      }
      ++s;
    }
  };
  if (j.contains("commitment")) read2(j["commitment"], gen_ids, sol.u);
  if (j.contains("startup")) read2(j["startup"], gen_ids, sol.v);
  if (j.contains("dispatch")) read3(j["dispatch"], gen_ids, sol.p);
  if (j.contains("angles")) read3(j["angles"], bus_ids, sol.theta);
  if (j.contains("flows")) read3(j["flows"], branch_ids, sol.flow);
  if (j.contains("curtailment")) read3(j["curtailment"], ren_ids, sol.curtail);
  if (j.contains("storage")) {
    const auto& js = j["storage"];
    if (js.contains("charge")) read3(js["charge"], es_ids, sol.charge);
    if (js.contains("discharge")) read3(js["discharge"], es_ids, sol.discharge);
    if (js.contains("energy")) read3(js["energy"], es_ids, sol.energy);
    if (js.contains("mode_charge"))
      read3(js["mode_charge"], es_ids, sol.mode_charge);
    if (js.contains("mode_discharge"))
      read3(js["mode_discharge"], es_ids, sol.mode_discharge);
  }
  if (j.contains("lmp")) {
    read3(j["lmp"], bus_ids, out.lmp.price);
    out.has_lmp = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metrics / comparison output

inline json metrics_to_json(const MetricsReport& r) {
  json j;
  j["variant"] = r.variant;
  j["case_name"] = r.case_name;
  j["status"] = to_string(r.status);
  j["operational_cost"] = {
      {"total", r.objective},
      {"no_load", r.breakdown.no_load},
      {"startup", r.breakdown.startup},
      {"weighted_energy", r.breakdown.weighted_energy},
      {"curtailment_penalty", r.breakdown.curtailment_penalty}};
  j["load_payment"] = {{"expected", r.load_payment_expected},
                       {"unweighted", r.load_payment_unweighted}};
  j["congestion"] = {{"distinct_branches", r.congested_branches},
                     {"line_hours", r.congested_line_hours}};
  json curt = json::array();
  for (const auto& ct : r.curtailment)
    curt.push_back({{"solar_mwh", ct.solar_mwh}, {"wind_mwh", ct.wind_mwh}});
  j["curtailment"] = curt;
  return j;
}

inline json comparison_to_json(const ComparisonTable& t) {
  json j;
  j["baseline"] = t.baseline;
  j["variants"] = t.variants;
  json rows = json::object();
  for (const auto& [name, cells] : t.rows) {
    json jr = json::array();
    for (const auto& cell : cells)
      jr.push_back({{"value", cell.value},
                    {"absolute", cell.absolute},
                    {"available", cell.available}});
    rows[name] = jr;
  }
  j["rows"] = rows;
  return j;
}

inline std::string comparison_to_csv(const ComparisonTable& t) {
  std::ostringstream os;
  os << "metric";
  for (const auto& v : t.variants) os << "," << v;
  os << "\n";
  for (const auto& [name, cells] : t.rows) {
    os << name;
    for (const auto& cell : cells) {
      os << ",";
      if (!cell.available)
        os << "n/a";
      else if (cell.absolute)
        os << cell.value << " (abs)";
      else
        os << cell.value;
    }
    os << "\n";
  }
  return os.str();
}

// Long-format branch loading table (variant, scenario, branch, hour,
// loading_fraction).
inline std::string branch_loading_csv(const Solution& sol,
                                      const EffectiveCase& eff) {
  std::ostringstream os;
  os << "variant,scenario,branch,hour,loading_fraction\n";
  for (const auto& [key, f] : sol.flow) {
    auto [k, t, s] = key;
    const auto& br = eff.base.branches.at(k);
    os << to_string(eff.variant) << "," << (s + 1) << "," << br.id << "," << t
       << "," << std::abs(f) / br.flow_limit_mw << "\n";
  }
  return os.str();
}

}  // namespace vtlscuc
