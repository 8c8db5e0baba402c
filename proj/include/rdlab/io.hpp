#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rdlab/error.hpp"
#include "rdlab/solver.hpp"

namespace rdlab {

/// Shortest decimal that round-trips to the same double; inf/nan as `inf`, `-inf`, `nan`.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

inline bool parse_double(std::string_view text, double& out) {
  if (text == "inf" || text == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

inline constexpr std::array<std::string_view, 15> kCsvColumns = {
    "t",        "dt",       "mass1",         "mass2", "E",    "E_rel", "D",       "fisher_u",
    "fisher_v", "fisher_w", "reaction_term", "l1_u",  "l1_v", "l1_w",  "min_conc"};

inline std::array<double, 15> row_values(const DiagnosticsRow& r) {
  return {r.t,        r.dt,       r.mass1,         r.mass2, r.E,    r.E_rel, r.D,       r.fisher_u,
          r.fisher_v, r.fisher_w, r.reaction_term, r.l1_u,  r.l1_v, r.l1_w,  r.min_conc};
}

inline DiagnosticsRow row_from_values(const std::array<double, 15>& v) {
  DiagnosticsRow r;
  r.t = v[0];
  r.dt = v[1];
  r.mass1 = v[2];
  r.mass2 = v[3];
  r.E = v[4];
  r.E_rel = v[5];
  r.D = v[6];
  r.fisher_u = v[7];
  r.fisher_v = v[8];
  r.fisher_w = v[9];
  r.reaction_term = v[10];
  r.l1_u = v[11];
  r.l1_v = v[12];
  r.l1_w = v[13];
  r.min_conc = v[14];
  return r;
}

inline std::size_t csv_column_index(std::string_view name) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (kCsvColumns[i] == name) return i;
  }
  throw InvalidParameter("unknown CSV column '" + std::string(name) + "'");
}

inline void write_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) os << (i ? "," : "") << kCsvColumns[i];
  os << '\n';
  for (const auto& row : rows) {
    const auto values = row_values(row);
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_double(values[i]);
    os << '\n';
  }
}

inline std::vector<DiagnosticsRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(1, "empty CSV");
  std::string header;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    header += (i ? "," : "");
    header += kCsvColumns[i];
  }
  if (line != header) throw ParseError(1, "unexpected CSV header");

  std::vector<DiagnosticsRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, 15> values{};
    std::size_t col = 0, start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell =
          std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
      if (col >= values.size() || !parse_double(cell, values[col])) {
        throw ParseError(line_no, "malformed CSV row");
      }
      ++col;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (col != values.size()) throw ParseError(line_no, "CSV row has " + std::to_string(col) + " columns");
    rows.push_back(row_from_values(values));
  }
  return rows;
}

struct CsvValidation {
  bool ok = true;
  double max_mass_drift = 0.0;  // relative to the first row
  double min_conc = std::numeric_limits<double>::infinity();
  std::vector<std::string> problems;
};

/// Re-checks the invariants every trajectory CSV must satisfy: strictly
/// increasing times, constant weighted masses and nonnegative concentrations.
inline CsvValidation validate_rows(const std::vector<DiagnosticsRow>& rows,
                                   double mass_tolerance = 1e-11) {
  CsvValidation v;
  if (rows.empty()) {
    v.ok = false;
    v.problems.push_back("no rows");
    return v;
  }
  if (rows.front().t != 0.0) v.problems.push_back("first row is not at t = 0");
  const double m1 = rows.front().mass1, m2 = rows.front().mass2;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i > 0 && !(r.t > rows[i - 1].t)) {
      v.problems.push_back("time not strictly increasing at row " + std::to_string(i + 1));
    }
    const double drift = std::max(std::abs(r.mass1 - m1) / std::abs(m1),
                                  std::abs(r.mass2 - m2) / std::abs(m2));
    v.max_mass_drift = std::max(v.max_mass_drift, drift);
    v.min_conc = std::min(v.min_conc, r.min_conc);
  }
  if (v.max_mass_drift >= mass_tolerance) {
    v.problems.push_back("mass drift " + format_double(v.max_mass_drift) + " exceeds " +
                         format_double(mass_tolerance));
  }
  if (v.min_conc < 0.0) v.problems.push_back("negative concentration recorded");
  v.ok = v.problems.empty();
  return v;
}

/// Plain-text report: one `key: value` pair per line, insertion order kept.
class Report {
 public:
  Report& add(std::string key, std::string value) {
    entries_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Report& add(std::string key, double value) { return add(std::move(key), format_double(value)); }
  Report& add(std::string key, std::size_t value) {
    return add(std::move(key), std::to_string(value));
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  friend std::ostream& operator<<(std::ostream& os, const Report& r) {
    for (const auto& [k, v] : r.entries_) os << k << ": " << v << '\n';
    return os;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace rdlab
