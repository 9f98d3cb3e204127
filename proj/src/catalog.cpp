#include "warpcheck/catalog.hpp"

#include <algorithm>

#include "warpcheck/errors.hpp"

namespace warpcheck {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& bundled_scenarios();
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto& [file, text] : detail::bundled_scenarios()) {
      CatalogEntry e{std::string(file), describe(text), text};
      if (e.info.name.empty()) e.info.name = e.file.substr(0, e.file.rfind('.'));
      out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.info.name < b.info.name; });
    return out;
  }();
  return entries;
}

const CatalogEntry* find_example(std::string_view name) {
  for (const auto& e : catalog())
    if (e.info.name == name) return &e;
  return nullptr;
}

std::string list_examples() {
  std::string out;
  for (const auto& e : catalog()) {
    out += e.info.name;
    if (!e.info.anchor.empty()) out += " (" + e.info.anchor + ")";
    out += "\n";
    if (!e.info.summary.empty()) out += "    " + e.info.summary + "\n";
  }
  return out;
}

Scenario load_example(std::string_view name) {
  const CatalogEntry* e = find_example(name);
  if (!e) throw ConfigError("unknown example '" + std::string(name) + "' (see list-examples)");
  return Scenario::parse(e->text, "example:" + e->file);
}

}  // namespace warpcheck
