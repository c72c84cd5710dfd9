#pragma once

#include <string>
#include <utility>
#include <vector>

namespace truncaug {

struct ScenarioCheck {
  std::string label;
  bool pass;
};

struct ScenarioReport {
  std::string name;
  std::vector<ScenarioCheck> checks;
  std::vector<std::pair<std::string, double>> metrics;
  bool pass() const;
};

/// example1_failure, example1_lyapunov, example2_borovkov,
/// example3_nostationary, regen_coupling, ctmc_mm1.
std::vector<std::string> scenario_names();

/// Runs a reproduction scenario against its hard-coded expectations. Throws
/// kInvalidArgument for an unknown name.
ScenarioReport run_scenario(const std::string& name);

/// {"scenario": ..., "pass": ..., "checks": {...}, "metrics": {...}}
std::string scenario_json(const ScenarioReport& report);

}  // namespace truncaug
