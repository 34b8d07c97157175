#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vtlscuc/case_model.hpp"

namespace vtlscuc {

constexpr double kInf = std::numeric_limits<double>::infinity();

using VarId = int;
using RowId = int;

struct Variable {
  std::string name;
  double lower = -kInf;
  double upper = kInf;
  double obj = 0.0;
  bool is_binary = false;
};

// lower <= sum(coeff * var) <= upper; equality when lower == upper.
struct Constraint {
  std::string name;
  Family family = Family::BALANCE;
  std::vector<std::pair<VarId, double>> terms;
  double lower = -kInf;
  double upper = kInf;
};

class IndexingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structured variable/row lookup for a built SSCUC model. Indices are
// positions in the effective case's entity vectors.
struct ModelIndex {
  int n_gens = 0, n_buses = 0, n_branches = 0, n_renewables = 0,
      n_storages = 0, n_vtl = 0, horizon = 0, n_scenarios = 0;

  std::map<std::pair<int, int>, VarId> u, v;                   // (g,t)
  std::map<std::tuple<int, int, int>, VarId> p;                // (g,t,s)
  std::map<std::tuple<int, int, int>, VarId> theta;            // (n,t,s)
  std::map<std::tuple<int, int, int>, VarId> flow;             // (k,t,s)
  std::map<std::tuple<int, int, int>, VarId> curtail;          // (r,t,s)
  std::map<std::tuple<int, int, int>, VarId> charge;           // (e,t,s)
  std::map<std::tuple<int, int, int>, VarId> discharge;        // (e,t,s)
  std::map<std::tuple<int, int, int>, VarId> energy;           // (e,t,s)
  std::map<std::tuple<int, int, int>, VarId> mode_charge;      // (e,t,s)
  std::map<std::tuple<int, int, int>, VarId> mode_discharge;   // (e,t,s)
  std::map<std::tuple<int, int, int>, RowId> balance_row;      // (n,t,s)
};

struct MilpModel {
  std::vector<Variable> vars;
  std::vector<Constraint> rows;
  ModelIndex index;

  VarId add_var(std::string name, double lower, double upper, double obj,
                bool binary = false) {
    vars.push_back({std::move(name), lower, upper, obj, binary});
    return static_cast<VarId>(vars.size() - 1);
  }

  RowId add_row(std::string name, Family family,
                std::vector<std::pair<VarId, double>> terms, double lower,
                double upper) {
    for (const auto& [vid, coeff] : terms) {
      (void)coeff;
      if (vid < 0 || vid >= static_cast<VarId>(vars.size()))
        throw IndexingError("constraint '" + name +
                            "' references unknown variable");
    }
    rows.push_back({std::move(name), family, std::move(terms), lower, upper});
    return static_cast<RowId>(rows.size() - 1);
  }

  int binary_count() const {
    int n = 0;
    for (const auto& v : vars) n += v.is_binary;
    return n;
  }

  double row_activity(const Constraint& row, const std::vector<double>& x) const {
    double a = 0;
    for (const auto& [vid, coeff] : row.terms) a += coeff * x[vid];
    return a;
  }

  // One line per constraint, for golden-file debugging.
  std::string debug_dump() const {
    std::ostringstream os;
    for (const auto& row : rows) {
      os << to_string(row.family) << " " << row.name << ":";
      if (row.lower == row.upper) {
        for (const auto& [vid, c] : row.terms)
          os << " " << (c >= 0 ? "+" : "") << c << "*" << vars[vid].name;
        os << " = " << row.lower;
      } else {
        if (row.lower != -kInf) os << " " << row.lower << " <=";
        for (const auto& [vid, c] : row.terms)
          os << " " << (c >= 0 ? "+" : "") << c << "*" << vars[vid].name;
        if (row.upper != kInf) os << " <= " << row.upper;
      }
      os << "\n";
    }
    return os.str();
  }
};

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeLimit, Error };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::Error: return "error";
  }
  return "?";
}

struct ObjectiveBreakdown {
  double no_load = 0.0;
  double startup = 0.0;
  double weighted_energy = 0.0;
  double curtailment_penalty = 0.0;
  double total() const {
    return no_load + startup + weighted_energy + curtailment_penalty;
  }
};

struct Solution {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  double mip_gap = 0.0;
  ObjectiveBreakdown breakdown;
  std::vector<double> x;  // raw values aligned with MilpModel::vars

  // Structured views (same indexing as ModelIndex).
  std::map<std::pair<int, int>, double> u, v;
  std::map<std::tuple<int, int, int>, double> p, theta, flow, curtail, charge,
      discharge, energy, mode_charge, mode_discharge;

  bool feasible() const {
    return status == SolveStatus::Optimal || status == SolveStatus::Feasible;
  }
};

}  // namespace vtlscuc
