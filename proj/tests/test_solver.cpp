#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"

using namespace vtlscuc;

namespace {

SolverOptions tight() {
  SolverOptions o;
  o.relative_mip_gap = 1e-9;
  return o;
}

std::map<VarId, double> binary_values(const MilpModel& m, const Solution& sol) {
  std::map<VarId, double> fix;
  for (std::size_t i = 0; i < m.vars.size(); ++i)
    if (m.vars[i].is_binary) fix[static_cast<VarId>(i)] = sol.x[i];
  return fix;
}

}  // namespace

TEST_CASE("milp solve recovers the one-bus optimum") {
  auto c = fixtures::one_bus(2);
  auto eff = apply_variant(c, ModelVariant::Base);
  auto scen = fixtures::empty_scenarios(1);
  auto m = build_model(eff, scen, c.options);
  auto sol = solve_milp(m, tight());
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == Catch::Approx(2000.0).margin(1e-6));
  CHECK(evaluate_objective(sol, eff, scen, c.options) ==
        Catch::Approx(sol.objective).margin(1e-6));
  CHECK(check_solution_feasibility(sol, m, 1e-6).pass());
}

TEST_CASE("milp solve reports infeasibility") {
  auto c = fixtures::one_bus(2);
  c.thermal_gens[0].p_max_mw = 50;  // cannot cover the 100 MW load
  auto eff = apply_variant(c, ModelVariant::Base);
  auto m = build_model(eff, fixtures::empty_scenarios(1), c.options);
  auto sol = solve_milp(m, tight());
  CHECK(sol.status == SolveStatus::Infeasible);
  CHECK_FALSE(sol.feasible());
}

TEST_CASE("surplus renewable output is curtailed, not infeasible") {
  auto c = fixtures::vss_three_bus(2);
  ScenarioSet scen;
  scen.probabilities = {1.0};
  scen.scenarios.resize(1);
  scen.scenarios[0]["w3"] = {600.0, 600.0};  // load is only 450
  auto eff = apply_variant(c, ModelVariant::Base);
  auto m = build_model(eff, scen, c.options);
  auto sol = solve_milp(m, tight());
  REQUIRE(sol.status == SolveStatus::Optimal);
  // 150 MW surplus per hour at the wind penalty of 500 $/MWh.
  CHECK(sol.objective == Catch::Approx(2 * 150 * 500.0).margin(1e-5));
  for (int t = 0; t < 2; ++t)
    CHECK(sol.curtail.at({0, t, 0}) == Catch::Approx(150.0).margin(1e-6));
  CHECK(check_solution_feasibility(sol, m, 1e-6).pass());
}

TEST_CASE("milp solve matches the enumeration oracle on a congested case") {
  auto c = fixtures::two_bus_congested(2);
  auto eff = apply_variant(c, ModelVariant::Base);
  auto m = build_model(eff, fixtures::empty_scenarios(1), c.options);
  auto sol = solve_milp(m, tight());
  auto oracle = brute_force_oracle(m, tight());
  REQUIRE(sol.status == SolveStatus::Optimal);
  REQUIRE(oracle.status == SolveStatus::Optimal);
  // Hand check: the 80 MW line caps the cheap unit, the expensive unit
  // covers the 70 MW remainder: 2 * (80*10 + 70*50) = 8600.
  CHECK(oracle.objective == Catch::Approx(8600.0).margin(1e-6));
  CHECK(sol.objective ==
        Catch::Approx(oracle.objective).epsilon(1e-9).margin(1e-6));
}

TEST_CASE("fixing binaries constrains the milp solve") {
  auto c = fixtures::two_bus_congested(2);
  auto eff = apply_variant(c, ModelVariant::Base);
  auto m = build_model(eff, fixtures::empty_scenarios(1), c.options);
  // Force the cheap unit off: the expensive one must carry everything.
  std::map<VarId, double> fix;
  for (int t = 0; t < 2; ++t) fix[m.index.u.at({0, t})] = 0.0;
  auto sol = solve_milp(m, tight(), fix);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == Catch::Approx(15000.0).margin(1e-6));  // 2*150*50
  CHECK(sol.u.at({0, 0}) == 0.0);
  CHECK(sol.u.at({0, 1}) == 0.0);
}

TEST_CASE("fixed-binary lp yields balance duals that price the margin") {
  auto c = fixtures::two_bus_congested(2);
  auto eff = apply_variant(c, ModelVariant::Base);
  auto scen = fixtures::empty_scenarios(1);
  auto m = build_model(eff, scen, c.options);
  auto milp = solve_milp(m, tight());
  REQUIRE(milp.status == SolveStatus::Optimal);
  auto [lp, duals] = solve_lp_fixed(m, binary_values(m, milp), tight());
  CHECK(lp.objective == Catch::Approx(milp.objective).margin(1e-6));
  auto lmp = extract_lmp(duals, scen);
  for (int t = 0; t < 2; ++t) {
    // Congested line: each bus is priced by its own marginal unit.
    CHECK(lmp.price.at({0, t, 0}) == Catch::Approx(10.0).margin(1e-6));
    CHECK(lmp.price.at({1, t, 0}) == Catch::Approx(50.0).margin(1e-6));
  }

  // Finite-difference check: a 0.1 MW bump at bus b2 in hour 0 moves the
  // LP objective by lambda * delta.
  const double delta = 0.1;
  auto bumped = m;
  auto rid = m.index.balance_row.at({1, 0, 0});
  bumped.rows[rid].lower += delta;
  bumped.rows[rid].upper += delta;
  auto [lp2, d2] = solve_lp_fixed(bumped, binary_values(m, milp), tight());
  (void)d2;
  double lambda = duals.lambda.at({1, 0, 0});
  CHECK(lp2.objective - lp.objective ==
        Catch::Approx(lambda * delta).margin(1e-4 * delta));
}

TEST_CASE("fixed-binary lp requires full binary coverage") {
  auto c = fixtures::one_bus(1);
  auto eff = apply_variant(c, ModelVariant::Base);
  auto m = build_model(eff, fixtures::empty_scenarios(1), c.options);
  std::map<VarId, double> partial{{m.index.u.at({0, 0}), 1.0}};
  CHECK_THROWS_AS(solve_lp_fixed(m, partial, tight()), std::invalid_argument);
}

TEST_CASE("fixed-binary lp surfaces infeasible fixings") {
  auto c = fixtures::one_bus(1);
  auto eff = apply_variant(c, ModelVariant::Base);
  auto m = build_model(eff, fixtures::empty_scenarios(1), c.options);
  std::map<VarId, double> all_off{{m.index.u.at({0, 0}), 0.0},
                                  {m.index.v.at({0, 0}), 0.0}};
  CHECK_THROWS_AS(solve_lp_fixed(m, all_off, tight()), LPInfeasibleUnderFixing);
}

TEST_CASE("lmp extraction removes the probability weighting") {
  auto c = fixtures::one_bus(1);
  auto eff = apply_variant(c, ModelVariant::Base);
  ScenarioSet scen;
  scen.probabilities = {0.6, 0.4};
  scen.scenarios.resize(2);
  auto m = build_model(eff, scen, c.options);
  auto milp = solve_milp(m, tight());
  REQUIRE(milp.status == SolveStatus::Optimal);
  auto [lp, duals] = solve_lp_fixed(m, binary_values(m, milp), tight());
  (void)lp;
  auto lmp = extract_lmp(duals, scen);
  // The raw duals are probability weighted; prices are not.
  CHECK(duals.lambda.at({0, 0, 0}) == Catch::Approx(6.0).margin(1e-6));
  CHECK(duals.lambda.at({0, 0, 1}) == Catch::Approx(4.0).margin(1e-6));
  CHECK(lmp.price.at({0, 0, 0}) == Catch::Approx(10.0).margin(1e-6));
  CHECK(lmp.price.at({0, 0, 1}) == Catch::Approx(10.0).margin(1e-6));

  ScenarioSet zero = scen;
  zero.probabilities = {1.0, 0.0};
  CHECK_THROWS_AS(extract_lmp(duals, zero), ZeroProbability);
}

TEST_CASE("a zero-probability scenario does not move the optimum") {
  auto c = fixtures::one_bus(2);
  auto eff = apply_variant(c, ModelVariant::Base);
  ScenarioSet padded;
  padded.probabilities = {1.0, 0.0};
  padded.scenarios.resize(2);
  auto m = build_model(eff, padded, c.options);
  auto sol = solve_milp(m, tight());
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == Catch::Approx(2000.0).margin(1e-6));
}

TEST_CASE("oracle enforces its binary budget") {
  auto c = fixtures::one_bus(2);
  auto eff = apply_variant(c, ModelVariant::Base);
  auto m = build_model(eff, fixtures::empty_scenarios(1), c.options);
  CHECK(m.binary_count() == 4);
  CHECK_THROWS_AS(brute_force_oracle(m, tight(), 3), TooManyBinaries);
}

TEST_CASE("oracle reports infeasibility when no fixing works") {
  auto c = fixtures::one_bus(1);
  c.thermal_gens[0].p_max_mw = 50;
  auto eff = apply_variant(c, ModelVariant::Base);
  auto m = build_model(eff, fixtures::empty_scenarios(1), c.options);
  auto oracle = brute_force_oracle(m, tight());
  CHECK(oracle.status == SolveStatus::Infeasible);
}

TEST_CASE("exported solutions satisfy the structural identities exactly") {
  auto c = fixtures::all_variants(2);
  auto eff = apply_variant(c, ModelVariant::VTL);
  auto m = build_model(eff, fixtures::empty_scenarios(2), c.options);
  auto sol = solve_milp(m, tight());
  REQUIRE(sol.status == SolveStatus::Optimal);
  for (std::size_t i = 0; i < m.vars.size(); ++i)
    if (m.vars[i].is_binary)
      CHECK(sol.x[i] == std::round(sol.x[i]));
  for (const auto& row : m.rows)
    if (row.family == Family::FLOW ||
        (row.family == Family::SOC && row.name.rfind("soc[", 0) == 0)) {
      double a = m.row_activity(row, sol.x);
      CHECK(std::abs(a - row.lower) <= 1e-9);
    }
}

TEST_CASE("repeated solves are bit-identical in deterministic mode") {
  auto c = fixtures::two_bus_congested(2);
  auto eff = apply_variant(c, ModelVariant::Base);
  auto m = build_model(eff, fixtures::empty_scenarios(2), c.options);
  auto a = solve_milp(m, tight());
  auto b = solve_milp(m, tight());
  REQUIRE(a.status == SolveStatus::Optimal);
  CHECK(a.objective == b.objective);
  CHECK(a.x == b.x);
}

TEST_CASE("unknown solver backends are rejected") {
  auto c = fixtures::one_bus(1);
  auto eff = apply_variant(c, ModelVariant::Base);
  auto m = build_model(eff, fixtures::empty_scenarios(1), c.options);
  SolverOptions o;
  o.backend = "cplex";
  CHECK_THROWS_AS(solve_milp(m, o), BackendUnavailable);
}
