#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "warpcheck/scenario.hpp"

namespace warpcheck {

/// A scenario bundled into the binary from scenarios/.
struct CatalogEntry {
  std::string file;
  ScenarioInfo info;
  std::string_view text;
};

const std::vector<CatalogEntry>& catalog();
/// nullptr when no entry has that name.
const CatalogEntry* find_example(std::string_view name);
/// "name (anchor)\n    summary" per entry.
std::string list_examples();
/// ConfigError for an unknown name.
Scenario load_example(std::string_view name);

}  // namespace warpcheck
