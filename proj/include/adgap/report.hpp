#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace adgap {

// Formats with 12 significant digits; integral values print without an
// exponent so reports diff cleanly.
std::string format_double(double v);

std::string json_escape(const std::string& s);

struct ReportRow {
  std::string name;
  double value = 0.0;
  std::optional<double> stderr_value;
  std::optional<double> bound;
  std::optional<bool> pass;
};

// Flat experiment report. Params are pre-encoded JSON fragments so that the
// serialization is byte-stable; the timestamp is left empty in deterministic
// mode and omitted from the output.
struct Report {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::vector<ReportRow> rows;

  void add_param(const std::string& key, const std::string& json_value) {
    params.emplace_back(key, json_value);
  }
  void add_param(const std::string& key, double v) { params.emplace_back(key, format_double(v)); }
  void add_param(const std::string& key, long long v) { params.emplace_back(key, std::to_string(v)); }
  void add_param_string(const std::string& key, const std::string& v) {
    params.emplace_back(key, "\"" + json_escape(v) + "\"");
  }

  std::string to_json() const;
  std::string to_csv() const;
  bool all_pass() const;
};

}  // namespace adgap
