#pragma once

// Report rows and their CSV / JSON-lines serializations. Output is
// byte-stable for identical reports: fixed header, fixed key order, floats
// with 17 significant digits.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace momineq {

struct ReportRow {
  std::string check_id;
  std::string theorem;
  double q = 0.0;  // tail rows carry t here, chain rows carry k
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  std::string status;   // pass | fail | not_asserted | rejected | resource
  std::string method;   // exact | mc | none
  double ci_halfwidth = 0.0;
};

struct Report {
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;  // diagnostics for rejected/resource rows

  bool any_fail() const {
    for (const auto& r : rows)
      if (r.status == "fail") return true;
    return false;
  }
  int exit_code() const { return any_fail() ? 1 : 0; }
};

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline const char* report_csv_header() {
  return "check_id,theorem,q,lhs,rhs,margin,status,method,ci_halfwidth";
}

inline void emit_csv(const Report& rep, std::ostream& out) {
  out << report_csv_header() << "\n";
  for (const auto& r : rep.rows) {
    out << r.check_id << ',' << r.theorem << ',' << format_g17(r.q) << ','
        << format_g17(r.lhs) << ',' << format_g17(r.rhs) << ',' << format_g17(r.margin) << ','
        << r.status << ',' << r.method << ',' << format_g17(r.ci_halfwidth) << "\n";
  }
}

inline void emit_jsonl(const Report& rep, std::ostream& out) {
  auto esc = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '"' || c == '\\') o.push_back('\\');
      o.push_back(c);
    }
    return o;
  };
  for (const auto& r : rep.rows) {
    out << "{\"check_id\":\"" << esc(r.check_id) << "\",\"theorem\":\"" << esc(r.theorem)
        << "\",\"q\":" << format_g17(r.q) << ",\"lhs\":" << format_g17(r.lhs)
        << ",\"rhs\":" << format_g17(r.rhs) << ",\"margin\":" << format_g17(r.margin)
        << ",\"status\":\"" << esc(r.status) << "\",\"method\":\"" << esc(r.method)
        << "\",\"ci_halfwidth\":" << format_g17(r.ci_halfwidth) << "}\n";
  }
}

}  // namespace momineq
