#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "warpcheck/check.hpp"

namespace warpcheck {

/// Command-line overrides; each one beats the value in the scenario file.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> atol;
  std::optional<double> rtol;
};

/// Effective sampling and tolerance for one check.
struct Settings {
  std::uint64_t seed = 0;
  std::size_t samples = 100;
  Tolerance tol;
};

/// A check resolved against the scenario's definitions, ready to run.
struct PlannedCheck {
  std::string name;
  std::string kind;
  int line = 0;
  /// Values from the file, before command-line overrides.
  Settings file;
  std::function<CheckResult(const Settings&)> run;

  Settings resolve(const RunOptions& options) const;
};

/// The `# name:`, `# summary:` and `# anchor:` header comments.
struct ScenarioInfo {
  std::string name;
  std::string summary;
  std::string anchor;
};
ScenarioInfo describe(std::string_view text);

/// A parsed and validated scenario file.  See docs/scenario-format.md.
class Scenario {
 public:
  /// ConfigError "origin:line: message" on any syntax or reference error.
  static Scenario parse(std::string_view text, const std::string& origin);
  static Scenario load(const std::string& path);

  const std::string& origin() const { return origin_; }
  const ScenarioInfo& info() const { return info_; }
  const std::vector<PlannedCheck>& checks() const { return checks_; }

 private:
  std::string origin_;
  ScenarioInfo info_;
  std::vector<PlannedCheck> checks_;
  std::shared_ptr<const void> state_;
};

/// Names of every check kind a scenario may use.
const std::vector<std::string>& check_kinds();

}  // namespace warpcheck
