#include "adgap/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace adgap {

std::string format_double(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Report::to_json() const {
  std::ostringstream out;
  out << "{\"experiment\":\"" << json_escape(experiment) << "\",";
  out << "\"params\":{";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out << ",";
    out << "\"" << json_escape(params[i].first) << "\":" << params[i].second;
  }
  out << "},\"seed\":" << seed;
  if (!timestamp.empty()) out << ",\"timestamp\":\"" << json_escape(timestamp) << "\"";
  out << ",\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ReportRow& r = rows[i];
    if (i) out << ",";
    out << "{\"name\":\"" << json_escape(r.name) << "\",\"value\":" << format_double(r.value);
    out << ",\"stderr\":" << (r.stderr_value ? format_double(*r.stderr_value) : "null");
    out << ",\"bound\":" << (r.bound ? format_double(*r.bound) : "null");
    out << ",\"pass\":" << (r.pass ? (*r.pass ? "true" : "false") : "null") << "}";
  }
  out << "]}";
  return out.str();
}

std::string Report::to_csv() const {
  std::ostringstream out;
  out << "name,value,stderr,bound,pass\n";
  for (const ReportRow& r : rows) {
    out << r.name << "," << format_double(r.value) << ",";
    if (r.stderr_value) out << format_double(*r.stderr_value);
    out << ",";
    if (r.bound) out << format_double(*r.bound);
    out << ",";
    if (r.pass) out << (*r.pass ? "true" : "false");
    out << "\n";
  }
  return out.str();
}

bool Report::all_pass() const {
  for (const ReportRow& r : rows)
    if (r.pass && !*r.pass) return false;
  return true;
}

}  // namespace adgap
