#include <chrono>
#include <optional>

#include "warpcheck/errors.hpp"
#include "warpcheck/report.hpp"

namespace warpcheck {

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
  std::size_t n = 0;
  for (const auto& r : records)
    if (!r.result.ok()) ++n;
  return n;
}

Report run_scenario(const Scenario& scenario, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto& checks = scenario.checks();
  Report report;
  report.scenario = scenario.info().name;
  report.origin = scenario.origin();
  report.options = options;
  report.records.resize(checks.size());
  std::vector<std::optional<std::string>> errors(checks.size());
  parallel_for(checks.size(), [&](std::size_t i) {
    const PlannedCheck& c = checks[i];
    CheckRecord& rec = report.records[i];
    rec.kind = c.kind;
    rec.line = c.line;
    rec.settings = c.resolve(options);
    try {
      rec.result = c.run(rec.settings);
    } catch (const Error& e) {
      errors[i] = scenario.origin() + ":" + std::to_string(c.line) + ": check '" + c.name + "': " + e.what();
    }
  });
  for (const auto& e : errors)
    if (e) throw ConfigError(*e);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

int exit_code(const Report& report) { return report.passed() ? 0 : 1; }

}  // namespace warpcheck
