#pragma once

#include <map>
#include <string>
#include <vector>

#include "vtlscuc/vtlscuc.hpp"

namespace fixtures {

using namespace vtlscuc;

// Single bus, one cheap generator, flat load.
inline CaseFile one_bus(int horizon = 2, double load = 100.0) {
  CaseFile c;
  c.name = "one-bus";
  c.horizon = horizon;
  c.buses.push_back({"b1", "lp1"});
  c.load_profiles.push_back(
      {"lp1", "b1", std::vector<double>(horizon, load)});
  c.thermal_gens.push_back({"g1", "b1", 0, 200, 200, 10, 0, 0, false, 0});
  return c;
}

// Two buses joined by a tight line: cheap generation at b1, expensive at b2,
// load at b2 larger than the line limit.
inline CaseFile two_bus_congested(int horizon = 2) {
  CaseFile c;
  c.name = "two-bus-congested";
  c.horizon = horizon;
  c.buses.push_back({"b1", ""});
  c.buses.push_back({"b2", "lp2"});
  c.branches.push_back({"k12", "b1", "b2", 0.1, 80.0, false});
  c.load_profiles.push_back(
      {"lp2", "b2", std::vector<double>(horizon, 150.0)});
  c.thermal_gens.push_back({"gA", "b1", 0, 200, 200, 10, 0, 0, false, 0});
  c.thermal_gens.push_back({"gB", "b2", 0, 200, 200, 50, 0, 0, false, 0});
  return c;
}

// two_bus_congested plus a candidate parallel line for the PT variant.
inline CaseFile two_bus_pt(int horizon = 2) {
  CaseFile c = two_bus_congested(horizon);
  c.name = "two-bus-pt";
  c.branches.push_back({"k12b", "b1", "b2", 0.1, 80.0, true});
  return c;
}

// One bus with a storage unit; storage is never profitable here.
inline CaseFile one_bus_bess(int horizon = 2) {
  CaseFile c = one_bus(horizon);
  c.name = "one-bus-bess";
  c.storages.push_back({"e1", "b1", 0, 50, 25, 25, 0.9, 0.9, 25, {}});
  return c;
}

// Small case admitting every variant: congested line with storages at both
// ends forming a VTL pair, plus a candidate duplicate line.
inline CaseFile all_variants(int horizon = 2) {
  CaseFile c = two_bus_pt(horizon);
  c.name = "all-variants";
  c.storages.push_back({"e1", "b1", 0, 60, 30, 30, 0.95, 0.95, 30, {}});
  c.storages.push_back({"e2", "b2", 0, 60, 30, 30, 0.95, 0.95, 30, {}});
  c.vtl_pairs.push_back({"vt1", {"e1", "e2"}, std::string("k12")});
  return c;
}

// Scenario set with no renewable entries (for cases without renewables).
inline ScenarioSet empty_scenarios(int count = 1) {
  ScenarioSet s;
  s.scenarios.resize(count);
  s.probabilities.assign(count, 1.0 / count);
  return s;
}

// Three-bus stochastic case engineered so the expected-value commitment is
// strictly suboptimal (VSS > 0): an expensive flexible unit A, a cheap
// small unit B with a high no-load cost, and a wind plant that carries
// scenario risk.
inline CaseFile vss_three_bus(int horizon = 6) {
  CaseFile c;
  c.name = "vss-three-bus";
  c.horizon = horizon;
  c.buses.push_back({"n1", ""});
  c.buses.push_back({"n2", ""});
  c.buses.push_back({"n3", "lp3"});
  c.branches.push_back({"k13", "n1", "n3", 0.1, 2000.0, false});
  c.branches.push_back({"k23", "n2", "n3", 0.1, 2000.0, false});
  c.load_profiles.push_back(
      {"lp3", "n3", std::vector<double>(horizon, 450.0)});
  c.thermal_gens.push_back({"A", "n1", 0, 1000, 1000, 100, 0, 0, false, 0});
  c.thermal_gens.push_back({"B", "n2", 0, 100, 100, 10, 7000, 0, false, 0});
  c.renewables.push_back(
      {"w3", "n3", RenewableKind::Wind, std::vector<double>(horizon, 400.0)});
  return c;
}

// Hand-authored two-point scenario set for vss_three_bus: wind at base with
// probability 0.8, zero wind with probability 0.2.
inline ScenarioSet vss_scenarios(const CaseFile& c) {
  ScenarioSet s;
  s.probabilities = {0.8, 0.2};
  s.scenarios.resize(2);
  s.scenarios[0]["w3"] = std::vector<double>(c.horizon, 400.0);
  s.scenarios[1]["w3"] = std::vector<double>(c.horizon, 0.0);
  return s;
}

}  // namespace fixtures
