#pragma once

#include "fdfsi/diagnostics/energy.hpp"

#include <array>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace fdfsi::io {

inline constexpr const char *timeseries_header =
    "t,E_k_fluid,E_k_solid_delta,E_d,E_p,E_total,E_ratio,R_step,mass_variation";

using TimeseriesRow = std::array<double, 9>;

inline TimeseriesRow to_row(const diagnostics::EnergyReport &r) {
  return {r.t,
          r.E_k_fluid,
          r.E_k_solid_delta,
          r.E_d,
          r.E_p,
          r.E_total,
          r.E_ratio.value_or(std::numeric_limits<double>::quiet_NaN()),
          r.R_step,
          r.mass_variation};
}

/// 17 significant digits, enough to parse back to the same double.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_timeseries(std::ostream &os, const std::vector<diagnostics::EnergyReport> &reports) {
  if (reports.empty())
    throw std::invalid_argument("write_timeseries: empty series");
  os << timeseries_header << '\n';
  for (const auto &r : reports) {
    const auto row = to_row(r);
    for (std::size_t k = 0; k < row.size(); ++k)
      os << (k ? "," : "") << format_number(row[k]);
    os << '\n';
  }
}

inline void write_timeseries(const std::string &path,
                             const std::vector<diagnostics::EnergyReport> &reports) {
  std::ofstream os(path);
  if (!os)
    throw Error("write_timeseries: cannot open '" + path + "' for writing");
  write_timeseries(os, reports);
  if (!os)
    throw Error("write_timeseries: write to '" + path + "' failed");
}

inline std::vector<TimeseriesRow> read_timeseries(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || line != timeseries_header)
    throw Error("read_timeseries: missing or unexpected header");
  std::vector<TimeseriesRow> rows;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    TimeseriesRow row{};
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= row.size())
        throw Error("read_timeseries: too many columns in row " + std::to_string(rows.size() + 1));
      char *end = nullptr;
      errno = 0;
      row[k++] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw Error("read_timeseries: bad number '" + cell + "'");
    }
    if (k != row.size())
      throw Error("read_timeseries: too few columns in row " + std::to_string(rows.size() + 1));
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<TimeseriesRow> read_timeseries(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw Error("read_timeseries: cannot open '" + path + "'");
  return read_timeseries(is);
}

} // namespace fdfsi::io
