// vtlscuc: scenario-based stochastic SCUC with virtual transmission lines.
//
// Subcommands: validate, gen-scenarios, solve, compare, report.
// Exit codes: 0 success, 1 error, 2 infeasible.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vtlscuc/vtlscuc.hpp"

namespace fs = std::filesystem;
using namespace vtlscuc;

namespace {

struct GlobalFlags {
  std::string solver = "highs";
  double mip_gap = 1e-4;
  double time_limit = 600.0;
  bool deterministic = true;
  std::optional<double> congestion_eps;
  std::string lmp_convention = "expected";
};

SolverOptions solver_options(const GlobalFlags& g) {
  SolverOptions o;
  o.backend = g.solver;
  o.relative_mip_gap = g.mip_gap;
  o.time_limit_seconds = g.time_limit;
  o.deterministic_mode = g.deterministic;
  return o;
}

struct ScenarioSource {
  std::string file;
  int count = 0;
  std::uint64_t seed = 0;
  std::vector<double> probs;
};

ScenarioSet acquire_scenarios(const ScenarioSource& src, const CaseFile& c) {
  if (!src.file.empty()) return load_scenario_set(src.file);
  if (src.count <= 0)
    throw std::invalid_argument(
        "exactly one scenario source required: --scenarios FILE or --count N "
        "--seed K");
  return generate_scenarios(c, SigmaSchedule::defaults(c.horizon), src.count,
                            src.seed, src.probs);
}

std::string metrics_to_csv(const MetricsReport& r) {
  std::ostringstream os;
  os << "metric,value\n";
  os << "status," << to_string(r.status) << "\n";
  os << "operational_cost," << r.objective << "\n";
  os << "no_load_cost," << r.breakdown.no_load << "\n";
  os << "startup_cost," << r.breakdown.startup << "\n";
  os << "weighted_energy_cost," << r.breakdown.weighted_energy << "\n";
  os << "curtailment_penalty," << r.breakdown.curtailment_penalty << "\n";
  os << "load_payment_expected," << r.load_payment_expected << "\n";
  os << "load_payment_unweighted," << r.load_payment_unweighted << "\n";
  for (std::size_t s = 0; s < r.congested_branches.size(); ++s)
    os << "congested_branches_s" << (s + 1) << "," << r.congested_branches[s]
       << "\n";
  for (std::size_t s = 0; s < r.congested_line_hours.size(); ++s)
    os << "congested_line_hours_s" << (s + 1) << ","
       << r.congested_line_hours[s] << "\n";
  for (std::size_t s = 0; s < r.curtailment.size(); ++s) {
    os << "curtailment_solar_mwh_s" << (s + 1) << ","
       << r.curtailment[s].solar_mwh << "\n";
    os << "curtailment_wind_mwh_s" << (s + 1) << ","
       << r.curtailment[s].wind_mwh << "\n";
  }
  return os.str();
}

json run_manifest(const fs::path& case_path, const ScenarioSet& scen,
                  const std::string& variants, const GlobalFlags& g,
                  const std::string& status, double objective,
                  double wall_seconds) {
  json j;
  j["schema"] = "vtl-scuc-run/1";
  j["case_hash"] = detail::fnv1a_hex(detail::read_file(case_path));
  j["scenario_hash"] = detail::fnv1a_hex(scenario_set_to_json(scen).dump());
  j["variants"] = variants;
  j["solver"] = {{"backend", g.solver},
                 {"mip_gap", g.mip_gap},
                 {"time_limit", g.time_limit},
                 {"deterministic", g.deterministic}};
  if (scen.generated) j["seed"] = scen.seed;
  j["status"] = status;
  j["objective"] = objective;
  j["wall_time_seconds"] = wall_seconds;
  return j;
}

void write_run_outputs(const fs::path& out_dir, const RunResult& run,
                       const CaseFile& c, const ScenarioSet& scen) {
  fs::create_directories(out_dir);
  json sol_json = solution_to_json(run.sol, run.eff,
                                   run.has_lmp ? &run.lmp : nullptr);
  detail::atomic_write(out_dir / "solution.json", sol_json.dump(2) + "\n");
  MetricsReport metrics = compute_metrics(run, c, scen);
  detail::atomic_write(out_dir / "metrics.json",
                       metrics_to_json(metrics).dump(2) + "\n");
  detail::atomic_write(out_dir / "metrics.csv", metrics_to_csv(metrics));
}

int cmd_validate(const std::string& case_path) {
  CaseFile c = load_case(case_path);
  auto rep = validate_case(c);
  if (rep.empty()) {
    std::cout << "case OK: " << c.name << " (" << c.buses.size() << " buses, "
              << c.branches.size() << " branches, T=" << c.horizon << ")\n";
    return 0;
  }
  std::cerr << rep.summary();
  return 1;
}

int cmd_gen_scenarios(const std::string& case_path, const ScenarioSource& src,
                      const std::string& out) {
  CaseFile c = load_case(case_path);
  auto rep = validate_case(c);
  if (!rep.empty()) {
    std::cerr << rep.summary();
    return 1;
  }
  ScenarioSet set = generate_scenarios(c, SigmaSchedule::defaults(c.horizon),
                                       src.count, src.seed, src.probs);
  save_scenario_set(set, out);
  std::cout << "wrote " << set.count() << " scenarios to " << out << "\n";
  return 0;
}

int cmd_solve(const std::string& case_path, const std::string& variant_name,
              const ScenarioSource& src, const std::string& out,
              const GlobalFlags& g) {
  auto t0 = std::chrono::steady_clock::now();
  CaseFile c = load_case(case_path);
  if (g.congestion_eps) c.options.congestion_epsilon = *g.congestion_eps;
  ModelVariant variant = parse_variant(variant_name);
  ScenarioSet scen = acquire_scenarios(src, c);

  RunResult run = run_variant(c, variant, scen, solver_options(g));
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  fs::path out_dir(out);
  fs::create_directories(out_dir);
  if (src.file.empty()) save_scenario_set(scen, out_dir / "scenarios.json");
  write_run_outputs(out_dir, run, c, scen);
  detail::atomic_write(
      out_dir / "manifest.json",
      run_manifest(case_path, scen, variant_name, g, to_string(run.sol.status),
                   run.sol.objective, wall)
              .dump(2) +
          "\n");

  if (run.sol.status == SolveStatus::Infeasible) {
    std::cerr << "infeasible: no commitment satisfies the "
              << to_string(variant) << " constraint families\n";
    return 2;
  }
  if (!run.sol.feasible()) {
    std::cerr << "solver failed: " << to_string(run.sol.status) << "\n";
    return 1;
  }
  std::cout << "status=" << to_string(run.sol.status)
            << " objective=" << run.sol.objective << " gap=" << run.sol.mip_gap
            << "\n";
  return 0;
}

json derived_claims(const std::vector<MetricsReport>& reports) {
  const MetricsReport *base = nullptr, *pt = nullptr, *bess = nullptr,
                      *vtl = nullptr;
  for (const auto& r : reports) {
    if (r.variant == "base") base = &r;
    if (r.variant == "pt") pt = &r;
    if (r.variant == "bess") bess = &r;
    if (r.variant == "vtl") vtl = &r;
  }
  json j = json::object();
  if (base && pt && vtl && base->objective > 0) {
    double pt_pct = 100.0 * pt->objective / base->objective;
    double vtl_pct = 100.0 * vtl->objective / base->objective;
    j["cost_reduction_pt_pct"] = 100.0 - pt_pct;
    j["cost_reduction_vtl_pct"] = 100.0 - vtl_pct;
    j["vtl_extra_cost_reduction_points"] = pt_pct - vtl_pct;
  }
  if (base && bess && vtl) {
    json relief = json::array();
    for (std::size_t s = 0; s < base->congested_branches.size(); ++s) {
      int b = base->congested_branches[s];
      int relief_bess = s < bess->congested_branches.size()
                            ? b - bess->congested_branches[s]
                            : 0;
      int relief_vtl =
          s < vtl->congested_branches.size() ? b - vtl->congested_branches[s] : 0;
      relief.push_back({{"scenario", s + 1},
                        {"base_congested", b},
                        {"relief_bess", relief_bess},
                        {"relief_vtl", relief_vtl}});
    }
    j["congestion_relief"] = relief;
  }
  return j;
}

void write_table_csvs(const fs::path& out_dir, const ComparisonTable& table,
                      const std::vector<MetricsReport>& reports,
                      const std::string& lmp_convention) {
  // Cost and load payment as percent of base.
  std::ostringstream cost;
  cost << "metric";
  for (const auto& v : table.variants) cost << "," << v;
  cost << "\n";
  auto emit_row = [&](std::ostringstream& os, const std::string& label,
                      const std::string& key) {
    os << label;
    for (const auto& cell : table.rows.at(key)) {
      os << ",";
      if (!cell.available)
        os << "n/a";
      else if (cell.absolute)
        os << cell.value << " (abs)";
      else
        os << cell.value;
    }
    os << "\n";
  };
  emit_row(cost, "operational_cost_pct", "operational_cost");
  emit_row(cost, "load_payment_pct",
           lmp_convention == "unweighted" ? "load_payment_unweighted"
                                          : "load_payment_expected");
  detail::atomic_write(out_dir / "cost_payment.csv", cost.str());

  // Congestion counts are reported absolute, one scenario per row.
  std::ostringstream cong;
  cong << "scenario";
  for (const auto& v : table.variants) cong << "," << v;
  cong << "\n";
  int S = reports.empty() ? 0 : reports.front().scenario_count;
  for (int s = 0; s < S; ++s) {
    cong << (s + 1);
    for (const auto& r : reports) {
      cong << ",";
      if (r.status == SolveStatus::Infeasible || r.status == SolveStatus::Error)
        cong << "n/a";
      else
        cong << (s < static_cast<int>(r.congested_branches.size())
                     ? r.congested_branches[s]
                     : 0);
    }
    cong << "\n";
  }
  detail::atomic_write(out_dir / "congestion.csv", cong.str());

  // Curtailment as percent of base per scenario; absolute zeros flagged.
  std::ostringstream curt;
  curt << "scenario";
  for (const auto& v : table.variants) curt << "," << v;
  curt << "\n";
  for (int s = 0; s < S; ++s) {
    curt << (s + 1);
    for (const auto& cell : table.rows.at("curtailment_s" + std::to_string(s + 1))) {
      curt << ",";
      if (!cell.available)
        curt << "n/a";
      else if (cell.absolute)
        curt << cell.value << " (abs)";
      else
        curt << cell.value;
    }
    curt << "\n";
  }
  detail::atomic_write(out_dir / "curtailment.csv", curt.str());
}

int cmd_compare(const std::string& case_path,
                const std::vector<std::string>& variant_names,
                const ScenarioSource& src, const std::string& out,
                const std::string& baseline, const GlobalFlags& g) {
  if (variant_names.size() < 2)
    throw std::invalid_argument("compare needs at least two variants");
  auto t0 = std::chrono::steady_clock::now();
  CaseFile c = load_case(case_path);
  if (g.congestion_eps) c.options.congestion_epsilon = *g.congestion_eps;
  ScenarioSet scen = acquire_scenarios(src, c);

  fs::path out_dir(out);
  fs::create_directories(out_dir);
  if (src.file.empty()) save_scenario_set(scen, out_dir / "scenarios.json");

  std::vector<MetricsReport> reports;
  std::ostringstream loading_csv;
  loading_csv << "variant,scenario,branch,hour,loading_fraction\n";
  for (const auto& name : variant_names) {
    ModelVariant variant = parse_variant(name);
    try {
      RunResult run = run_variant(c, variant, scen, solver_options(g));
      write_run_outputs(out_dir / name, run, c, scen);
      reports.push_back(compute_metrics(run, c, scen));
      if (run.sol.feasible()) {
        std::string chunk = branch_loading_csv(run.sol, run.eff);
        loading_csv << chunk.substr(chunk.find('\n') + 1);
      }
      std::cout << name << ": " << to_string(run.sol.status)
                << " objective=" << run.sol.objective << "\n";
    } catch (const std::exception& e) {
      std::cerr << name << ": failed: " << e.what() << "\n";
      MetricsReport r;
      r.variant = name;
      r.case_name = c.name;
      r.scenario_count = scen.count();
      r.status = SolveStatus::Error;
      reports.push_back(r);
    }
  }
  detail::atomic_write(out_dir / "branch_loading.csv", loading_csv.str());

  ComparisonTable table = compare_variants(reports, baseline);
  json cmp = comparison_to_json(table);
  cmp["derived_claims"] = derived_claims(reports);
  detail::atomic_write(out_dir / "comparison.json", cmp.dump(2) + "\n");
  detail::atomic_write(out_dir / "comparison.csv", comparison_to_csv(table));
  write_table_csvs(out_dir, table, reports, g.lmp_convention);

  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::string all;
  for (const auto& v : variant_names) all += (all.empty() ? "" : ",") + v;
  detail::atomic_write(out_dir / "manifest.json",
                       run_manifest(case_path, scen, all, g, "compare", 0.0,
                                    wall)
                               .dump(2) +
                           "\n");
  return 0;
}

int cmd_report(const std::string& case_path, const std::string& scen_path,
               const std::vector<std::string>& run_dirs,
               const std::string& baseline, const std::string& out,
               const GlobalFlags& g) {
  CaseFile c = load_case(case_path);
  if (g.congestion_eps) c.options.congestion_epsilon = *g.congestion_eps;
  ScenarioSet scen = load_scenario_set(scen_path);

  fs::path out_dir(out);
  fs::create_directories(out_dir);
  std::vector<MetricsReport> reports;
  for (const auto& dir : run_dirs) {
    json j = json::parse(detail::read_file(fs::path(dir) / "solution.json"));
    LoadedSolution loaded = solution_from_json(j, c);
    EffectiveCase eff = apply_variant(c, parse_variant(loaded.variant));
    MetricsReport r;
    r.variant = loaded.variant;
    r.case_name = c.name;
    r.scenario_count = scen.count();
    r.status = loaded.sol.status;
    if (loaded.sol.feasible()) {
      r.objective = loaded.sol.breakdown.total();
      r.breakdown = loaded.sol.breakdown;
      if (loaded.has_lmp) {
        r.load_payment_expected =
            load_payment(loaded.lmp, eff.base, scen, LmpConvention::Expected);
        r.load_payment_unweighted =
            load_payment(loaded.lmp, eff.base, scen, LmpConvention::Unweighted);
      }
      double eps = c.options.congestion_epsilon;
      r.congested_branches = congestion_count(loaded.sol, eff, eps);
      r.congested_line_hours = congestion_line_hours(loaded.sol, eff, eps);
      r.curtailment = curtailment_totals(loaded.sol, eff, c.options);
    }
    reports.push_back(std::move(r));
    detail::atomic_write(out_dir / (reports.back().variant + "-metrics.json"),
                         metrics_to_json(reports.back()).dump(2) + "\n");
    detail::atomic_write(out_dir / (reports.back().variant + "-metrics.csv"),
                         metrics_to_csv(reports.back()));
  }
  if (!baseline.empty() && reports.size() >= 2) {
    ComparisonTable table = compare_variants(reports, baseline);
    json cmp = comparison_to_json(table);
    cmp["derived_claims"] = derived_claims(reports);
    detail::atomic_write(out_dir / "comparison.json", cmp.dump(2) + "\n");
    detail::atomic_write(out_dir / "comparison.csv", comparison_to_csv(table));
    write_table_csvs(out_dir, table, reports, g.lmp_convention);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario-based stochastic SCUC with BESS-based virtual "
               "transmission lines"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--solver", g.solver, "Solver backend (solver.backend key)");
  app.add_option("--mip-gap", g.mip_gap, "Relative MIP gap");
  app.add_option("--time-limit", g.time_limit, "Solver time limit in seconds");
  app.add_flag("--deterministic,!--no-deterministic", g.deterministic,
               "Deterministic solver mode");
  double eps_flag = -1;
  app.add_option("--congestion-eps", eps_flag,
                 "Relative congestion threshold override");
  app.add_option("--lmp-convention", g.lmp_convention,
                 "Load payment convention: expected|unweighted");

  std::string case_path, variant, scen_file, out = "out", baseline = "base";
  std::vector<std::string> variants, run_dirs;
  ScenarioSource src;

  auto add_scenario_flags = [&](CLI::App* cmd) {
    cmd->add_option("--scenarios", src.file, "Scenario file");
    cmd->add_option("--count", src.count, "Number of scenarios to generate");
    cmd->add_option("--seed", src.seed, "Scenario generation seed");
    cmd->add_option("--probs", src.probs, "Scenario probabilities")
        ->delimiter(',');
  };

  auto* validate = app.add_subcommand("validate", "Validate a case file");
  validate->add_option("--case", case_path, "Case file")->required();

  auto* gen = app.add_subcommand("gen-scenarios",
                                 "Generate a renewable forecast-error "
                                 "scenario file");
  gen->add_option("--case", case_path, "Case file")->required();
  gen->add_option("--count", src.count, "Number of scenarios")->required();
  gen->add_option("--seed", src.seed, "RNG seed")->required();
  gen->add_option("--probs", src.probs, "Scenario probabilities")
      ->delimiter(',');
  gen->add_option("--out", out, "Output scenario file")->required();

  auto* solve = app.add_subcommand("solve", "Solve one variant");
  solve->add_option("--case", case_path, "Case file")->required();
  solve->add_option("--variant", variant, "base|pt|bess|vtl")->required();
  add_scenario_flags(solve);
  solve->add_option("--out", out, "Output directory");

  auto* compare = app.add_subcommand("compare",
                                     "Solve several variants on identical "
                                     "scenario data and tabulate");
  compare->add_option("--case", case_path, "Case file")->required();
  compare->add_option("--variants", variants, "Variant list")
      ->delimiter(',')
      ->required();
  add_scenario_flags(compare);
  compare->add_option("--baseline", baseline, "Baseline variant");
  compare->add_option("--out", out, "Output directory");

  auto* report = app.add_subcommand(
      "report", "Recompute metrics from persisted solutions");
  report->add_option("--case", case_path, "Case file")->required();
  report->add_option("--scenarios", scen_file, "Scenario file")->required();
  report->add_option("--runs", run_dirs, "Run directories")->required();
  report->add_option("--baseline", baseline, "Baseline variant");
  report->add_option("--out", out, "Output directory");

  CLI11_PARSE(app, argc, argv);
  if (eps_flag > 0) g.congestion_eps = eps_flag;

  try {
    if (app.got_subcommand(validate)) return cmd_validate(case_path);
    if (app.got_subcommand(gen)) return cmd_gen_scenarios(case_path, src, out);
    if (app.got_subcommand(solve))
      return cmd_solve(case_path, variant, src, out, g);
    if (app.got_subcommand(compare))
      return cmd_compare(case_path, variants, src, out, baseline, g);
    if (app.got_subcommand(report))
      return cmd_report(case_path, scen_file, run_dirs, baseline, out, g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
