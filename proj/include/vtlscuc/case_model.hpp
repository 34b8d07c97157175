#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vtlscuc {

enum class RenewableKind { Solar, Wind };

inline std::string to_string(RenewableKind k) {
  return k == RenewableKind::Solar ? "solar" : "wind";
}

struct Bus {
  std::string id;
  std::string load_profile_ref;  // empty means no load at this bus
};

struct Branch {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  double reactance_pu = 0.0;
  double flow_limit_mw = 0.0;
  bool is_candidate_pt = false;
};

struct ThermalGen {
  std::string id;
  std::string bus;
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
  double ramp_mw_per_interval = 0.0;
  double cost_linear_per_mwh = 0.0;
  double cost_no_load_per_interval = 0.0;
  double cost_startup = 0.0;
  bool initial_committed = false;
  double initial_output_mw = 0.0;
};

struct RenewableUnit {
  std::string id;
  std::string bus;
  RenewableKind kind = RenewableKind::Solar;
  std::vector<double> base_profile_mw;
};

struct StorageUnit {
  std::string id;
  std::string bus;
  double e_min_mwh = 0.0;
  double e_max_mwh = 0.0;
  double p_charge_max_mw = 0.0;
  double p_discharge_max_mw = 0.0;
  double eta_charge = 1.0;
  double eta_discharge = 1.0;
  double initial_energy_mwh = 0.0;
  std::optional<double> terminal_energy_min_mwh;
};

struct VtlPair {
  std::string id;
  std::vector<std::string> storage_ids;  // exactly two
  std::optional<std::string> spanned_branch;
};

struct LoadProfile {
  std::string id;
  std::string bus;
  std::vector<double> demand_mw;
};

struct CaseOptions {
  double interval_hours = 1.0;
  double penalty_solar_per_mwh = 500.0;
  double penalty_wind_per_mwh = 500.0;
  std::string reference_bus;  // empty -> first bus
  double congestion_epsilon = 1e-4;
  double mva_base = 100.0;
};

struct CaseFile {
  std::string schema = "vtl-scuc/1";
  std::string name;
  int horizon = 24;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<ThermalGen> thermal_gens;
  std::vector<RenewableUnit> renewables;
  std::vector<StorageUnit> storages;
  std::vector<VtlPair> vtl_pairs;
  std::vector<LoadProfile> load_profiles;
  CaseOptions options;

  const Bus* find_bus(const std::string& id) const {
    for (const auto& b : buses)
      if (b.id == id) return &b;
    return nullptr;
  }
  const LoadProfile* find_load_profile(const std::string& id) const {
    for (const auto& p : load_profiles)
      if (p.id == id) return &p;
    return nullptr;
  }
  const StorageUnit* find_storage(const std::string& id) const {
    for (const auto& e : storages)
      if (e.id == id) return &e;
    return nullptr;
  }
  const Branch* find_branch(const std::string& id) const {
    for (const auto& k : branches)
      if (k.id == id) return &k;
    return nullptr;
  }
  std::string reference_bus() const {
    if (!options.reference_bus.empty()) return options.reference_bus;
    return buses.empty() ? std::string() : buses.front().id;
  }
};

enum class ModelVariant { Base, PT, BESS, VTL };

inline std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::Base: return "base";
    case ModelVariant::PT: return "pt";
    case ModelVariant::BESS: return "bess";
    case ModelVariant::VTL: return "vtl";
  }
  return "?";
}

inline ModelVariant parse_variant(const std::string& s) {
  if (s == "base") return ModelVariant::Base;
  if (s == "pt") return ModelVariant::PT;
  if (s == "bess") return ModelVariant::BESS;
  if (s == "vtl") return ModelVariant::VTL;
  throw std::invalid_argument("unknown variant: " + s);
}

struct ValidationEntry {
  std::string entity_kind;
  std::string entity_id;
  std::string rule;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool empty() const { return entries.empty(); }
  void add(std::string kind, std::string id, std::string rule) {
    entries.push_back({std::move(kind), std::move(id), std::move(rule)});
  }
  std::string summary() const {
    std::string s;
    for (const auto& e : entries)
      s += e.entity_kind + " '" + e.entity_id + "': " + e.rule + "\n";
    return s;
  }
};

class VariantPrerequisiteMissing : public std::runtime_error {
 public:
  explicit VariantPrerequisiteMissing(const std::string& kind)
      : std::runtime_error("variant prerequisite missing: " + kind),
        missing_kind(kind) {}
  std::string missing_kind;
};

// Constraint families a variant's model must emit.
enum class Family { UC, RAMP, FLOW, LIMIT, BALANCE, CURT, SOC, VTL, REF };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::UC: return "UC";
    case Family::RAMP: return "RAMP";
    case Family::FLOW: return "FLOW";
    case Family::LIMIT: return "LIMIT";
    case Family::BALANCE: return "BALANCE";
    case Family::CURT: return "CURT";
    case Family::SOC: return "SOC";
    case Family::VTL: return "VTL";
    case Family::REF: return "REF";
  }
  return "?";
}

// Case after variant application: candidate branches resolved, storage and
// VTL activity flags set, constraint families fixed.
struct EffectiveCase {
  CaseFile base;  // branches already filtered per variant
  ModelVariant variant = ModelVariant::Base;
  bool storages_active = false;
  bool vtl_active = false;
  std::vector<Family> families;
};

inline ValidationReport validate_case(const CaseFile& c) {
  ValidationReport rep;
  if (c.schema != "vtl-scuc/1")
    rep.add("CaseFile", c.name, "schema must be vtl-scuc/1");
  if (c.horizon <= 0) rep.add("CaseFile", c.name, "horizon > 0");
  if (c.buses.empty()) rep.add("CaseFile", c.name, "at least one bus");

  std::set<std::string> bus_ids;
  for (const auto& b : c.buses) {
    if (!bus_ids.insert(b.id).second) rep.add("Bus", b.id, "ids unique");
    if (!b.load_profile_ref.empty() && !c.find_load_profile(b.load_profile_ref))
      rep.add("Bus", b.id, "load_profile_ref resolves");
  }

  std::set<std::string> branch_ids;
  for (const auto& k : c.branches) {
    if (!branch_ids.insert(k.id).second) rep.add("Branch", k.id, "ids unique");
    if (k.from_bus == k.to_bus) rep.add("Branch", k.id, "from_bus != to_bus");
    if (!(k.reactance_pu > 0)) rep.add("Branch", k.id, "reactance_pu > 0");
    if (!(k.flow_limit_mw > 0)) rep.add("Branch", k.id, "flow_limit_mw > 0");
    if (!bus_ids.count(k.from_bus)) rep.add("Branch", k.id, "from_bus exists");
    if (!bus_ids.count(k.to_bus)) rep.add("Branch", k.id, "to_bus exists");
  }

  std::set<std::string> gen_ids;
  for (const auto& g : c.thermal_gens) {
    if (!gen_ids.insert(g.id).second) rep.add("ThermalGen", g.id, "ids unique");
    if (!(0 <= g.p_min_mw && g.p_min_mw <= g.p_max_mw))
      rep.add("ThermalGen", g.id, "0 <= p_min <= p_max");
    if (g.ramp_mw_per_interval < 0) rep.add("ThermalGen", g.id, "ramp >= 0");
    if (g.cost_linear_per_mwh < 0 || g.cost_no_load_per_interval < 0 ||
        g.cost_startup < 0)
      rep.add("ThermalGen", g.id, "costs >= 0");
    if (g.initial_output_mw < 0 || g.initial_output_mw > g.p_max_mw)
      rep.add("ThermalGen", g.id, "initial_output in [0, p_max]");
    if (!g.initial_committed && g.initial_output_mw != 0)
      rep.add("ThermalGen", g.id, "initial_output = 0 when offline");
    if (!bus_ids.count(g.bus)) rep.add("ThermalGen", g.id, "bus exists");
  }

  std::set<std::string> ren_ids;
  for (const auto& r : c.renewables) {
    if (!ren_ids.insert(r.id).second)
      rep.add("RenewableUnit", r.id, "ids unique");
    if (static_cast<int>(r.base_profile_mw.size()) != c.horizon)
      rep.add("RenewableUnit", r.id, "base_profile length = T");
    for (double v : r.base_profile_mw)
      if (v < 0) {
        rep.add("RenewableUnit", r.id, "base_profile values >= 0");
        break;
      }
    if (!bus_ids.count(r.bus)) rep.add("RenewableUnit", r.id, "bus exists");
  }

  std::set<std::string> es_ids;
  for (const auto& e : c.storages) {
    if (!es_ids.insert(e.id).second) rep.add("StorageUnit", e.id, "ids unique");
    if (!(0 <= e.e_min_mwh && e.e_min_mwh <= e.initial_energy_mwh &&
          e.initial_energy_mwh <= e.e_max_mwh))
      rep.add("StorageUnit", e.id, "0 <= e_min <= initial_energy <= e_max");
    if (!(e.p_charge_max_mw > 0 && e.p_discharge_max_mw > 0))
      rep.add("StorageUnit", e.id, "power limits > 0");
    if (!(e.eta_charge > 0 && e.eta_charge <= 1 && e.eta_discharge > 0 &&
          e.eta_discharge <= 1))
      rep.add("StorageUnit", e.id, "efficiencies in (0,1]");
    if (!bus_ids.count(e.bus)) rep.add("StorageUnit", e.id, "bus exists");
  }

  for (const auto& vt : c.vtl_pairs) {
    if (vt.storage_ids.size() != 2 ||
        vt.storage_ids[0] == vt.storage_ids[1]) {
      rep.add("VtlPair", vt.id, "exactly two distinct storage ids");
      continue;
    }
    const StorageUnit* e0 = c.find_storage(vt.storage_ids[0]);
    const StorageUnit* e1 = c.find_storage(vt.storage_ids[1]);
    if (!e0 || !e1) {
      rep.add("VtlPair", vt.id, "storage ids resolve");
      continue;
    }
    if (vt.spanned_branch) {
      const Branch* k = c.find_branch(*vt.spanned_branch);
      if (!k) {
        rep.add("VtlPair", vt.id, "spanned_branch resolves");
      } else {
        std::set<std::string> terminals = {k->from_bus, k->to_bus};
        if (!terminals.count(e0->bus) || !terminals.count(e1->bus) ||
            e0->bus == e1->bus)
          rep.add("VtlPair", vt.id,
                  "storages sit on the spanned branch's terminal buses");
      }
    }
  }

  for (const auto& p : c.load_profiles) {
    if (static_cast<int>(p.demand_mw.size()) != c.horizon)
      rep.add("LoadProfile", p.id, "demand length = T");
    for (double v : p.demand_mw)
      if (v < 0) {
        rep.add("LoadProfile", p.id, "demand values >= 0");
        break;
      }
    if (!bus_ids.count(p.bus)) rep.add("LoadProfile", p.id, "bus exists");
  }

  if (!(c.options.interval_hours > 0))
    rep.add("CaseOptions", c.name, "interval_hours > 0");
  if (c.options.penalty_solar_per_mwh < 0 || c.options.penalty_wind_per_mwh < 0)
    rep.add("CaseOptions", c.name, "penalties >= 0");
  if (!c.options.reference_bus.empty() &&
      !bus_ids.count(c.options.reference_bus))
    rep.add("CaseOptions", c.name, "reference_bus exists");
  if (!(c.options.mva_base > 0)) rep.add("CaseOptions", c.name, "mva_base > 0");

  // Connectivity over non-candidate branches.
  if (c.buses.size() > 1) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& k : c.branches) {
      if (k.is_candidate_pt) continue;
      adj[k.from_bus].push_back(k.to_bus);
      adj[k.to_bus].push_back(k.from_bus);
    }
    std::set<std::string> seen;
    std::queue<std::string> q;
    q.push(c.buses.front().id);
    seen.insert(c.buses.front().id);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (const auto& v : adj[u])
        if (seen.insert(v).second) q.push(v);
    }
    if (seen.size() != bus_ids.size())
      rep.add("CaseFile", c.name, "network graph connected");
  }
  return rep;
}

inline EffectiveCase apply_variant(const CaseFile& c, ModelVariant variant) {
  auto has_candidate = std::any_of(c.branches.begin(), c.branches.end(),
                                   [](const Branch& k) { return k.is_candidate_pt; });
  switch (variant) {
    case ModelVariant::PT:
      if (!has_candidate) throw VariantPrerequisiteMissing("candidate PT branch");
      break;
    case ModelVariant::BESS:
      if (c.storages.empty()) throw VariantPrerequisiteMissing("StorageUnit");
      break;
    case ModelVariant::VTL:
      if (c.vtl_pairs.empty()) throw VariantPrerequisiteMissing("VtlPair");
      if (c.storages.empty()) throw VariantPrerequisiteMissing("StorageUnit");
      break;
    case ModelVariant::Base:
      break;
  }

  EffectiveCase eff;
  eff.base = c;
  eff.variant = variant;
  if (variant != ModelVariant::PT) {
    auto& ks = eff.base.branches;
    ks.erase(std::remove_if(ks.begin(), ks.end(),
                            [](const Branch& k) { return k.is_candidate_pt; }),
             ks.end());
  }
  eff.storages_active =
      variant == ModelVariant::BESS || variant == ModelVariant::VTL;
  eff.vtl_active = variant == ModelVariant::VTL;

  eff.families = {Family::UC, Family::RAMP, Family::FLOW, Family::LIMIT,
                  Family::BALANCE, Family::CURT, Family::REF};
  if (eff.storages_active) eff.families.push_back(Family::SOC);
  if (eff.vtl_active) eff.families.push_back(Family::VTL);
  return eff;
}

}  // namespace vtlscuc
