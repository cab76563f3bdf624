#pragma once

#include <filesystem>

#include "gradex/csv.hpp"
#include "gradex/presets.hpp"
#include "gradex/regularity.hpp"

namespace gradex {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct RunOptions {
  std::filesystem::path out_dir = "out";
  bool override_admissibility = false;
};

struct RunOutcome {
  std::vector<CheckResult> checks;
  std::string report;
  bool ok = true;
};

// execute one named pipeline (support | distance | extend | uniqueness |
// supremal | verify), writing CSV/JSON artifacts and report.txt under
// options.out_dir. Configuration or geometry problems throw; check failures
// show up as failing entries in the outcome.
RunOutcome run_scenario(const ScenarioConfig& config, const std::string& command,
                        const RunOptions& options);

// the built-in invariant suite over the canonical scenarios; tolerance
// overrides come from the scenario's "tolerances" map
std::vector<CheckResult> run_verification_suite(
    const std::map<std::string, double>& tolerance_overrides);

std::string format_report(const std::vector<CheckResult>& checks);

// extended distance between query points: min over coincident node copies
// (duplicated slit nodes) on both ends
double extended_distance(const std::shared_ptr<const MeshGraph>& graph, const Vec& from,
                         const Vec& to);

}  // namespace gradex
