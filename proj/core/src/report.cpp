#include "asepkpz/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace asepkpz {

using nlohmann::json;

std::string report_to_json(const Report& report) {
  json j;
  j["tool_version"] = report.tool_version;
  j["subcommand"] = report.subcommand;
  j["seed"] = report.seed;
  j["params"] = json::object();
  for (const auto& [k, v] : report.params) j["params"][k] = v;
  j["observables"] = json::array();
  for (const auto& row : report.observables) {
    json o;
    o["name"] = row.name;
    o["estimate"] = row.estimate;
    o["stderr"] = row.stderr_;
    o["n_effective"] = row.n_effective;
    j["observables"].push_back(o);
  }
  j["diagnostics"] = json::object();
  for (const auto& [k, v] : report.diagnostics) j["diagnostics"][k] = v;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

namespace {

bool fail(std::string* why, const std::string& message) {
  if (why) *why = message;
  return false;
}

bool is_num(const json& j) { return j.is_number(); }

}  // namespace

bool validate_report_json(const std::string& text, std::string* why) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) return fail(why, "not valid JSON");
  if (!j.is_object()) return fail(why, "top level must be an object");
  for (const char* key :
       {"tool_version", "subcommand", "seed", "params", "observables", "diagnostics",
        "warnings"})
    if (!j.contains(key)) return fail(why, std::string("missing key: ") + key);
  if (!j["tool_version"].is_string()) return fail(why, "tool_version must be a string");
  if (!j["subcommand"].is_string()) return fail(why, "subcommand must be a string");
  if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
    return fail(why, "seed must be an integer");
  if (!j["params"].is_object()) return fail(why, "params must be an object");
  for (const auto& [k, v] : j["params"].items())
    if (!is_num(v)) return fail(why, "params." + k + " must be a number");
  if (!j["observables"].is_array()) return fail(why, "observables must be an array");
  for (const auto& o : j["observables"]) {
    if (!o.is_object()) return fail(why, "observable entries must be objects");
    if (!o.contains("name") || !o["name"].is_string())
      return fail(why, "observable missing string name");
    for (const char* key : {"estimate", "stderr", "n_effective"})
      if (!o.contains(key) || !is_num(o[key]))
        return fail(why, std::string("observable missing numeric ") + key);
  }
  if (!j["diagnostics"].is_object()) return fail(why, "diagnostics must be an object");
  for (const auto& [k, v] : j["diagnostics"].items())
    if (!is_num(v)) return fail(why, "diagnostics." + k + " must be a number");
  if (!j["warnings"].is_array()) return fail(why, "warnings must be an array");
  for (const auto& w : j["warnings"])
    if (!w.is_string()) return fail(why, "warnings entries must be strings");
  return true;
}

std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace asepkpz
