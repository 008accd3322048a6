#pragma once

#include <functional>
#include <map>

#include "subhc/experiments/commutant.hpp"
#include "subhc/experiments/extraction.hpp"
#include "subhc/experiments/mixing.hpp"
#include "subhc/experiments/projection.hpp"
#include "subhc/experiments/rolewicz.hpp"
#include "subhc/experiments/transfer.hpp"

namespace subhc::experiments {

using Runner = std::function<ExperimentReport(const json&)>;

/// Named experiments in suite order.
inline const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r = {
      {"projection", run_projection_experiment},
      {"mixing", run_mixing_experiment},
      {"criterion_transfer", run_criterion_transfer_experiment},
      {"commutant", run_commutant_experiment},
      {"criterion_extraction", run_criterion_extraction},
      {"rolewicz", run_rolewicz_experiment},
  };
  return r;
}

inline std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [name, run] : registry()) out.push_back(name);
  return out;
}

/// Runs one named experiment. `cfg` is that experiment's own section.
inline ExperimentReport run_experiment(const std::string& name, const json& cfg) {
  for (const auto& [n, run] : registry()) {
    if (n == name) return run(cfg);
  }
  throw ConfigError("unknown experiment '" + name + "'", "/experiment");
}

}  // namespace subhc::experiments
