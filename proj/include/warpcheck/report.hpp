#pragma once

#include <string>
#include <vector>

#include "warpcheck/scenario.hpp"

namespace warpcheck {

struct CheckRecord {
  std::string kind;
  int line = 0;
  Settings settings;
  CheckResult result;
};

/// One record per check, in scenario order.
struct Report {
  std::string scenario;
  std::string origin;
  RunOptions options;
  std::vector<CheckRecord> records;
  double wall_seconds = 0.0;

  bool passed() const;
  std::size_t failures() const;
};

/// Runs the checks concurrently; record order follows the file.  Errors
/// raised while evaluating a check become ConfigError naming the check.
Report run_scenario(const Scenario& scenario, const RunOptions& options);

/// 0 when every check passed (hypotheses-not-met and informational count),
/// 1 otherwise.
int exit_code(const Report& report);

/// Same fields as the JSON lines, one record per block.
std::string render_text(const Report& report, bool color);
/// JSON lines: a run header, one object per check, then a summary.
/// Wall time is left out so identical runs give identical bytes.
std::string render_json(const Report& report);

std::string version_string();

}  // namespace warpcheck
