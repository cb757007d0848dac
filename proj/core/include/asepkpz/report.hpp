#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace asepkpz {

struct ObservableRow {
  std::string name;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double n_effective = 0.0;
};

// Aggregate result of a run. Serialization is byte-stable for identical
// contents: keys are emitted sorted and doubles use shortest round-trip
// form. Wall-clock timing is deliberately not part of the report; it goes
// to stderr so repeated runs with one seed compare equal.
struct Report {
  std::string tool_version;
  std::string subcommand;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
  std::vector<ObservableRow> observables;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;
};

std::string report_to_json(const Report& report);

// Structural check of a serialized report against the documented schema
// (docs/report_schema.md). On failure returns false and, if given, fills
// why with the first violation found.
bool validate_report_json(const std::string& text, std::string* why = nullptr);

// Fixed-format helpers for CSV output: enough digits to round-trip.
std::string fmt_g17(double x);

}  // namespace asepkpz
