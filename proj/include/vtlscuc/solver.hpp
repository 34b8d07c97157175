#pragma once

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "vtlscuc/bridge_script.hpp"
#include "vtlscuc/builder.hpp"
#include "vtlscuc/milp.hpp"

namespace vtlscuc {

struct SolverOptions {
  double relative_mip_gap = 1e-6;
  double time_limit_seconds = 600.0;
  int threads = 1;
  bool deterministic_mode = true;
  std::string backend = "highs";       // solver.backend configuration key
  std::string python_exe = "python3";  // interpreter hosting the bridge
};

class BackendUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class LPInfeasibleUnderFixing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class TooManyBinaries : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ZeroProbability : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dual of each nodal balance row from the fixed-binary LP.
struct DualSurface {
  std::map<std::tuple<int, int, int>, double> lambda;  // (n,t,s)
};

// Per-scenario price in $/MWh (probability de-weighted).
struct LmpSurface {
  std::map<std::tuple<int, int, int>, double> price;  // (n,t,s)
};

namespace detail {

constexpr double kWireInf = 1e30;

struct BridgeTask {
  std::string type;  // "milp" or "lp"
  std::map<VarId, double> fix;
  double gap = 1e-6;
  double time_limit = 1e7;
  bool refine_lp = false;
};

struct BridgeResult {
  std::string status;
  double objective = 0.0;
  double gap = 0.0;
  std::vector<double> x;
  std::vector<double> duals;
  std::string message;
};

inline double to_wire(double v) {
  if (v == kInf) return kWireInf;
  if (v == -kInf) return -kWireInf;
  return v;
}

inline nlohmann::json serialize_model(const MilpModel& m) {
  nlohmann::json obj = nlohmann::json::array();
  nlohmann::json lb = nlohmann::json::array();
  nlohmann::json ub = nlohmann::json::array();
  nlohmann::json integer = nlohmann::json::array();
  for (const auto& v : m.vars) {
    obj.push_back(v.obj);
    lb.push_back(to_wire(v.lower));
    ub.push_back(to_wire(v.upper));
    integer.push_back(v.is_binary ? 1 : 0);
  }
  nlohmann::json lo = nlohmann::json::array();
  nlohmann::json up = nlohmann::json::array();
  nlohmann::json start = nlohmann::json::array();
  nlohmann::json index = nlohmann::json::array();
  nlohmann::json value = nlohmann::json::array();
  int nnz = 0;
  start.push_back(0);
  for (const auto& row : m.rows) {
    lo.push_back(to_wire(row.lower));
    up.push_back(to_wire(row.upper));
    for (const auto& [vid, coeff] : row.terms) {
      index.push_back(vid);
      value.push_back(coeff);
      ++nnz;
    }
    start.push_back(nnz);
  }
  return {{"obj", obj},
          {"lb", lb},
          {"ub", ub},
          {"integer", integer},
          {"rows",
           {{"lo", lo}, {"up", up}, {"start", start}, {"index", index},
            {"value", value}}}};
}

class HighsBridge {
 public:
  explicit HighsBridge(const SolverOptions& opts) : opts_(opts) {
    if (opts.backend != "highs")
      throw BackendUnavailable("unknown solver backend: " + opts.backend);
  }

  std::vector<BridgeResult> run(const MilpModel& model,
                                const std::vector<BridgeTask>& tasks) const {
    namespace fs = std::filesystem;
    nlohmann::json req;
    req["model"] = serialize_model(model);
    auto& jtasks = req["tasks"];
    jtasks = nlohmann::json::array();
    for (const auto& t : tasks) {
      nlohmann::json jt{{"type", t.type}};
      if (t.type == "milp") {
        jt["gap"] = t.gap;
        jt["time_limit"] = t.time_limit;
        if (t.refine_lp) jt["refine_lp"] = true;
      }
      if (!t.fix.empty()) {
        nlohmann::json jf = nlohmann::json::object();
        for (const auto& [vid, val] : t.fix) jf[std::to_string(vid)] = val;
        jt["fix"] = jf;
      }
      jtasks.push_back(std::move(jt));
    }

    fs::path dir = fs::temp_directory_path();
    std::string tag = "vtlscuc-" + std::to_string(getpid()) + "-" +
                      std::to_string(next_id());
    fs::path req_path = dir / (tag + "-req.json");
    fs::path resp_path = dir / (tag + "-resp.json");
    fs::path err_path = dir / (tag + "-err.txt");
    {
      std::ofstream out(req_path);
      out << req;
    }
    std::string cmd = opts_.python_exe + " '" + script_path().string() +
                      "' '" + req_path.string() + "' '" + resp_path.string() +
                      "' 2> '" + err_path.string() + "'";
    int rc = std::system(cmd.c_str());
    if (rc != 0) {
      std::ifstream err(err_path);
      std::stringstream diag;
      diag << err.rdbuf();
      cleanup(req_path, resp_path, err_path);
      throw BackendUnavailable("bridge invocation failed (exit " +
                               std::to_string(rc) + "): " + diag.str());
    }
    nlohmann::json resp;
    {
      std::ifstream in(resp_path);
      if (!in) {
        cleanup(req_path, resp_path, err_path);
        throw BackendUnavailable("bridge produced no response");
      }
      in >> resp;
    }
    cleanup(req_path, resp_path, err_path);

    std::vector<BridgeResult> results;
    for (const auto& jr : resp.at("results")) {
      BridgeResult r;
      r.status = jr.at("status").get<std::string>();
      if (jr.contains("objective")) r.objective = jr["objective"].get<double>();
      if (jr.contains("gap")) r.gap = jr["gap"].get<double>();
      if (jr.contains("x")) r.x = jr["x"].get<std::vector<double>>();
      if (jr.contains("duals"))
        r.duals = jr["duals"].get<std::vector<double>>();
      if (jr.contains("message")) r.message = jr["message"].get<std::string>();
      if (r.status == "error")
        throw NumericFailure("solver backend error: " + r.message);
      results.push_back(std::move(r));
    }
    return results;
  }

 private:
  static void cleanup(const std::filesystem::path& a,
                      const std::filesystem::path& b,
                      const std::filesystem::path& c) {
    std::error_code ec;
    std::filesystem::remove(a, ec);
    std::filesystem::remove(b, ec);
    std::filesystem::remove(c, ec);
  }

  static int next_id() {
    static int id = 0;
    return ++id;
  }

  // The bridge script is materialized once per process; an explicit path in
  // VTLSCUC_BRIDGE overrides it.
  static const std::filesystem::path& script_path() {
    static std::filesystem::path path = [] {
      if (const char* env = std::getenv("VTLSCUC_BRIDGE"))
        return std::filesystem::path(env);
      auto p = std::filesystem::temp_directory_path() /
               ("vtlscuc-bridge-" + std::to_string(getpid()) + ".py");
      std::ofstream out(p);
      out << kBridgeScript;
      return p;
    }();
    return path;
  }

  SolverOptions opts_;
};

inline SolveStatus parse_status(const std::string& s) {
  if (s == "optimal") return SolveStatus::Optimal;
  if (s == "feasible") return SolveStatus::Feasible;
  if (s == "infeasible") return SolveStatus::Infeasible;
  if (s == "time_limit") return SolveStatus::TimeLimit;
  return SolveStatus::Error;
}

// Flows follow angles and the SOC trajectory follows the charge/discharge
// schedule exactly; recompute both so the exported solution satisfies those
// identities to machine precision.
inline void tighten_solution(Solution& sol, const MilpModel& model) {
  const auto& ix = model.index;
  for (std::size_t i = 0; i < model.vars.size(); ++i)
    if (model.vars[i].is_binary) sol.x[i] = std::round(sol.x[i]);
  for (const auto& row : model.rows) {
    if (row.family == Family::FLOW) {
      // f + sum(b * theta) = 0, flow coefficient is 1.
      double acc = 0;
      VarId fvar = row.terms.front().first;
      for (std::size_t i = 1; i < row.terms.size(); ++i)
        acc += row.terms[i].second * sol.x[row.terms[i].first];
      sol.x[fvar] = -acc;
    } else if (row.family == Family::SOC && row.name.rfind("soc[", 0) == 0) {
      // E_t - eta_c*dt*c + dt/eta_d*d [- E_{t-1}] = rhs; solve for E_t.
      double acc = 0;
      VarId evar = row.terms.front().first;
      for (std::size_t i = 1; i < row.terms.size(); ++i)
        acc += row.terms[i].second * sol.x[row.terms[i].first];
      sol.x[evar] = row.lower - acc;
    }
  }
  populate_solution_views(sol, ix);
}

}  // namespace detail

inline Solution solve_milp(const MilpModel& model, const SolverOptions& opts,
                           const std::map<VarId, double>& fix = {}) {
  detail::HighsBridge bridge(opts);
  detail::BridgeTask task;
  task.type = "milp";
  task.gap = opts.relative_mip_gap;
  task.time_limit = opts.time_limit_seconds;
  task.refine_lp = true;
  task.fix = fix;
  auto results = bridge.run(model, {task});
  const auto& r = results.front();
  Solution sol;
  sol.status = detail::parse_status(r.status);
  if (sol.feasible()) {
    sol.objective = r.objective;
    sol.mip_gap = r.gap;
    sol.x = r.x;
    detail::tighten_solution(sol, model);
  }
  return sol;
}

inline std::pair<Solution, DualSurface> solve_lp_fixed(
    const MilpModel& model, const std::map<VarId, double>& fixed_binaries,
    const SolverOptions& opts) {
  for (std::size_t i = 0; i < model.vars.size(); ++i)
    if (model.vars[i].is_binary &&
        !fixed_binaries.count(static_cast<VarId>(i)))
      throw std::invalid_argument("fixed-binary assignment must cover " +
                                  model.vars[i].name);
  detail::HighsBridge bridge(opts);
  detail::BridgeTask task;
  task.type = "lp";
  task.fix = fixed_binaries;
  auto results = bridge.run(model, {task});
  const auto& r = results.front();
  if (r.status != "optimal")
    throw LPInfeasibleUnderFixing("fixed-binary LP status: " + r.status);
  Solution sol;
  sol.status = SolveStatus::Optimal;
  sol.objective = r.objective;
  sol.x = r.x;
  detail::tighten_solution(sol, model);
  DualSurface duals;
  for (const auto& [key, row] : model.index.balance_row)
    duals.lambda[key] = r.duals.at(row);
  return {std::move(sol), std::move(duals)};
}

inline LmpSurface extract_lmp(const DualSurface& duals,
                              const ScenarioSet& scen) {
  LmpSurface lmp;
  for (const auto& [key, lam] : duals.lambda) {
    int s = std::get<2>(key);
    double pi = scen.probabilities.at(s);
    if (!(pi > 0)) throw ZeroProbability("scenario " + std::to_string(s));
    lmp.price[key] = lam / pi;
  }
  return lmp;
}

// Exhaustive binary enumeration with an LP per feasible fixing. Assignments
// violating constraints whose support is all-binary are pruned before the
// LP. Ties break toward the lexicographically smallest assignment.
inline Solution brute_force_oracle(const MilpModel& model,
                                   const SolverOptions& opts, int limit = 20) {
  std::vector<VarId> bins;
  for (std::size_t i = 0; i < model.vars.size(); ++i)
    if (model.vars[i].is_binary) bins.push_back(static_cast<VarId>(i));
  const int nb = static_cast<int>(bins.size());
  if (nb > limit)
    throw TooManyBinaries(std::to_string(nb) + " binaries exceeds limit " +
                          std::to_string(limit));

  std::vector<const Constraint*> binary_rows;
  for (const auto& row : model.rows) {
    bool all_bin = true;
    for (const auto& [vid, coeff] : row.terms) {
      (void)coeff;
      if (!model.vars[vid].is_binary) all_bin = false;
    }
    if (all_bin && !row.terms.empty()) binary_rows.push_back(&row);
  }

  std::vector<detail::BridgeTask> tasks;
  std::vector<unsigned long long> task_mask;
  std::vector<double> assign(model.vars.size(), 0.0);
  for (unsigned long long mask = 0; mask < (1ULL << nb); ++mask) {
    // Lexicographic order: bit i (variable bins[i]) is the most significant
    // digit first when i is small.
    for (int i = 0; i < nb; ++i)
      assign[bins[i]] = (mask >> (nb - 1 - i)) & 1ULL ? 1.0 : 0.0;
    bool ok = true;
    for (const auto* row : binary_rows) {
      double a = 0;
      for (const auto& [vid, coeff] : row->terms) a += coeff * assign[vid];
      if (a < row->lower - 1e-9 || a > row->upper + 1e-9) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    detail::BridgeTask t;
    t.type = "lp";
    for (int i = 0; i < nb; ++i) t.fix[bins[i]] = assign[bins[i]];
    tasks.push_back(std::move(t));
    task_mask.push_back(mask);
  }

  Solution best;
  best.status = SolveStatus::Infeasible;
  if (tasks.empty()) return best;

  detail::HighsBridge bridge(opts);
  auto results = bridge.run(model, tasks);
  double best_obj = kInf;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.status != "optimal") continue;
    if (best_obj == kInf ||
        r.objective < best_obj - 1e-9 * std::max(1.0, std::abs(best_obj))) {
      best_obj = r.objective;
      best.status = SolveStatus::Optimal;
      best.objective = r.objective;
      best.x = r.x;
    }
  }
  if (best.status == SolveStatus::Optimal)
    detail::tighten_solution(best, model);
  return best;
}

}  // namespace vtlscuc
