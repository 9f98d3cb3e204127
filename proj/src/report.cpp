#include <Eigen/Core>
#include <cmath>
#include <json.hpp>

#include "warpcheck/report.hpp"

namespace warpcheck {

namespace {

using Json = nlohmann::ordered_json;

Json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

Json result_fields(const CheckResult& r) {
  Json j;
  j["name"] = r.name;
  j["status"] = std::string(to_string(r.status));
  j["max_residual"] = number(r.max_residual);
  j["scale"] = number(r.scale);
  j["atol"] = r.tol.atol;
  j["rtol"] = r.tol.rtol;
  j["bound"] = number(r.tol.bound(r.scale));
  Json w = Json::object();
  for (Eigen::Index i = 0; i < r.witness.size() && i < static_cast<Eigen::Index>(r.coords.size()); ++i)
    w[r.coords[static_cast<std::size_t>(i)]] = number(r.witness(i));
  j["witness"] = w;
  j["note"] = r.note;
  Json parts = Json::array();
  for (const auto& p : r.parts) parts.push_back(result_fields(p));
  j["parts"] = parts;
  return j;
}

Json record_fields(const CheckRecord& rec) {
  Json j;
  j["type"] = "check";
  j["check"] = rec.result.name;
  j["kind"] = rec.kind;
  j["line"] = rec.line;
  j["seed"] = rec.settings.seed;
  j["samples"] = rec.settings.samples;
  j["result"] = result_fields(rec.result);
  return j;
}

Json run_fields(const Report& r) {
  Json j;
  j["type"] = "run";
  j["scenario"] = r.scenario;
  j["origin"] = r.origin;
  j["version"] = version_string();
  j["seed"] = r.options.seed ? Json(*r.options.seed) : Json(nullptr);
  j["samples"] = r.options.samples ? Json(*r.options.samples) : Json(nullptr);
  j["atol"] = r.options.atol ? Json(*r.options.atol) : Json(nullptr);
  j["rtol"] = r.options.rtol ? Json(*r.options.rtol) : Json(nullptr);
  return j;
}

Json summary_fields(const Report& r) {
  Json j;
  j["type"] = "summary";
  j["checks"] = r.records.size();
  j["failed"] = r.failures();
  j["status"] = r.passed() ? "pass" : "fail";
  return j;
}

std::string scalar(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::string tag(const std::string& status, bool color) {
  const char* label = "PASS";
  const char* code = "32";
  if (status == "fail") label = "FAIL", code = "31";
  if (status == "hypotheses-not-met") label = "SKIP", code = "33";
  if (status == "informational") label = "INFO", code = "36";
  if (!color) return label;
  return std::string("\033[") + code + "m" + label + "\033[0m";
}

void render_result(std::string& out, const Json& r, const std::string& indent, bool color) {
  out += indent + tag(r["status"].get<std::string>(), color) + " " + r["name"].get<std::string>() + "\n";
  std::string line;
  for (const auto& [key, value] : r.items()) {
    if (key == "name" || key == "witness" || key == "note" || key == "parts") continue;
    line += (line.empty() ? "" : " ") + key + "=" + scalar(value);
  }
  out += indent + "     " + line + "\n";
  std::string w;
  for (const auto& [key, value] : r["witness"].items()) w += (w.empty() ? "" : " ") + key + "=" + scalar(value);
  out += indent + "     witness " + (w.empty() ? "-" : w) + "\n";
  if (!r["note"].get<std::string>().empty()) out += indent + "     note " + r["note"].get<std::string>() + "\n";
  if (!r["parts"].empty()) {
    out += indent + "     parts\n";
    for (const auto& p : r["parts"]) render_result(out, p, indent + "       ", color);
  }
}

std::string key_values(const Json& j, std::initializer_list<const char*> skip) {
  std::string line;
  for (const auto& [key, value] : j.items()) {
    bool skipped = false;
    for (const char* s : skip) skipped = skipped || key == s;
    if (!skipped) line += (line.empty() ? "" : " ") + key + "=" + scalar(value);
  }
  return line;
}

}  // namespace

std::string version_string() {
  return std::string("warpcheck ") + WARPCHECK_VERSION + ", Eigen " + std::to_string(EIGEN_WORLD_VERSION) + "." +
         std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION);
}

std::string render_json(const Report& report) {
  std::string out = run_fields(report).dump() + "\n";
  for (const auto& rec : report.records) out += record_fields(rec).dump() + "\n";
  out += summary_fields(report).dump() + "\n";
  return out;
}

std::string render_text(const Report& report, bool color) {
  std::string out = key_values(run_fields(report), {"type"}) + "\n\n";
  for (const auto& rec : report.records) {
    const Json j = record_fields(rec);
    out += key_values(j, {"type", "result"}) + "\n";
    render_result(out, j["result"], "  ", color);
    out += "\n";
  }
  out += key_values(summary_fields(report), {"type"}) + "\n";
  return out;
}

}  // namespace warpcheck
