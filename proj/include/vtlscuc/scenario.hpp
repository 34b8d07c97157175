#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "vtlscuc/case_model.hpp"

namespace vtlscuc {

// Hourly standard-deviation multipliers for the forecast-error noise.
struct SigmaSchedule {
  std::vector<double> solar;
  std::vector<double> wind;

  // Defaults: solar sigma 0 for hours 20-23 and 0-4, 0.05 for hours 9-16,
  // 0.02 otherwise; wind sigma 0.1 for all hours.
  static SigmaSchedule defaults(int horizon = 24) {
    SigmaSchedule s;
    s.solar.resize(horizon);
    s.wind.assign(horizon, 0.1);
    for (int t = 0; t < horizon; ++t) {
      int h = t % 24;
      if (h >= 20 || h <= 4)
        s.solar[t] = 0.0;
      else if (h >= 9 && h <= 16)
        s.solar[t] = 0.05;
      else
        s.solar[t] = 0.02;
    }
    return s;
  }

  double sigma(RenewableKind kind, int t) const {
    const auto& v = kind == RenewableKind::Solar ? solar : wind;
    if (t < 0 || t >= static_cast<int>(v.size()))
      throw std::out_of_range("sigma schedule index");
    return v[t];
  }
};

struct ScenarioSet {
  // scenarios[s][unit_id] = length-T output vector in MW.
  std::vector<std::map<std::string, std::vector<double>>> scenarios;
  std::vector<double> probabilities;
  std::uint64_t seed = 0;
  bool generated = false;  // false for hand-authored files
  SigmaSchedule schedule;  // provenance; empty for hand-authored files

  int count() const { return static_cast<int>(scenarios.size()); }

  const std::vector<double>& profile(int s, const std::string& unit_id) const {
    auto it = scenarios.at(s).find(unit_id);
    if (it == scenarios.at(s).end())
      throw std::out_of_range("scenario " + std::to_string(s) +
                              " missing unit " + unit_id);
    return it->second;
  }
};

class BadProbabilities : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Deterministic standard-normal draws: mt19937_64 stream mapped to (0,1)
// uniforms via the top 53 bits, then Box-Muller (cosine branch). The
// transform is fixed so scenario files reproduce bit-for-bit everywhere.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    double u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  double uniform01() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1)
  }
  std::mt19937_64 rng_;
};

}  // namespace detail

inline ScenarioSet generate_scenarios(const CaseFile& c,
                                      const SigmaSchedule& schedule, int count,
                                      std::uint64_t seed,
                                      const std::vector<double>& probabilities = {}) {
  if (count <= 0) throw BadProbabilities("scenario count must be positive");
  if (!probabilities.empty()) {
    if (static_cast<int>(probabilities.size()) != count)
      throw BadProbabilities("probabilities length != count");
    double sum = 0;
    for (double p : probabilities) {
      if (p <= 0) throw BadProbabilities("probabilities must be positive");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw BadProbabilities("probabilities must sum to 1");
  }

  ScenarioSet set;
  set.seed = seed;
  set.generated = true;
  set.schedule = schedule;
  set.probabilities = probabilities.empty()
                          ? std::vector<double>(count, 1.0 / count)
                          : probabilities;
  detail::NormalSampler draw(seed);
  set.scenarios.resize(count);
  for (int s = 0; s < count; ++s) {
    for (const auto& u : c.renewables) {
      std::vector<double> out(c.horizon);
      for (int t = 0; t < c.horizon; ++t) {
        double sigma = schedule.sigma(u.kind, t);
        double eps = sigma * draw();
        out[t] = std::max(0.0, u.base_profile_mw[t] * (1.0 + eps));
      }
      set.scenarios[s][u.id] = std::move(out);
    }
  }
  return set;
}

inline ValidationReport validate_scenario_set(const ScenarioSet& set,
                                              const CaseFile& c) {
  ValidationReport rep;
  if (set.scenarios.empty()) rep.add("ScenarioSet", "", "at least one scenario");
  if (set.probabilities.size() != set.scenarios.size())
    rep.add("ScenarioSet", "", "one probability per scenario");
  double sum = 0;
  for (double p : set.probabilities) {
    sum += p;
    if (p <= 0) rep.add("ScenarioSet", "", "all probabilities > 0");
  }
  if (!set.probabilities.empty() && std::abs(sum - 1.0) > 1e-9)
    rep.add("ScenarioSet", "", "probabilities sum to 1");
  for (std::size_t s = 0; s < set.scenarios.size(); ++s) {
    for (const auto& u : c.renewables) {
      auto it = set.scenarios[s].find(u.id);
      if (it == set.scenarios[s].end()) {
        rep.add("ScenarioSet", u.id,
                "unit covered in scenario " + std::to_string(s));
        continue;
      }
      if (static_cast<int>(it->second.size()) != c.horizon)
        rep.add("ScenarioSet", u.id,
                "profile length = T in scenario " + std::to_string(s));
      for (double v : it->second)
        if (v < 0) {
          rep.add("ScenarioSet", u.id,
                  "outputs >= 0 in scenario " + std::to_string(s));
          break;
        }
    }
  }
  return rep;
}

// Probability-weighted mean profile per unit; the expected-value scenario
// used by the EEV diagnostic.
inline std::map<std::string, std::vector<double>> expected_profiles(
    const ScenarioSet& set, const CaseFile& c) {
  std::map<std::string, std::vector<double>> mean;
  for (const auto& u : c.renewables) {
    std::vector<double> m(c.horizon, 0.0);
    for (int s = 0; s < set.count(); ++s) {
      const auto& prof = set.profile(s, u.id);
      for (int t = 0; t < c.horizon; ++t)
        m[t] += set.probabilities[s] * prof[t];
    }
    mean[u.id] = std::move(m);
  }
  return mean;
}

}  // namespace vtlscuc
