#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "momads/core.hpp"
#include "momads/driver.hpp"
#include "momads/metrics.hpp"

namespace momads::io {

// History values are written with 17 significant digits so that a re-read
// reproduces the run bit for bit.
inline std::string format_double(double v, int digits = 17) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline void write_history_csv(const std::string& path, const RunHistory& h,
                              std::size_t n, std::size_t m, std::size_t j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "eval";
  for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
  for (std::size_t i = 1; i <= m; ++i) out << ",f" << i;
  for (std::size_t i = 1; i <= j; ++i) out << ",c" << i;
  out << ",h\n";
  for (const auto& rec : h.evaluations) {
    out << rec.index;
    for (double v : rec.point) out << ',' << format_double(v);
    for (double v : rec.objectives) out << ',' << format_double(v);
    for (double v : rec.constraints) out << ',' << format_double(v);
    out << ',' << format_double(rec.h) << '\n';
  }
}

inline void write_front_csv(const std::string& path, const Front& front,
                            std::size_t m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < m; ++i) out << (i ? "," : "") << 'f' << i + 1;
  out << '\n';
  for (const auto& y : front) {
    for (std::size_t i = 0; i < y.size(); ++i)
      out << (i ? "," : "") << format_double(y[i]);
    out << '\n';
  }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

// strtod without the out-of-range exception: subnormal magnitudes are valid
// objective values and must round-trip.
inline double parse_double(const std::string& cell) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || static_cast<std::size_t>(end - begin) != cell.size())
    throw std::runtime_error("bad number: '" + cell + "'");
  return v;
}

inline Front read_front_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file " + path);
  Front front;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ObjectiveVector y;
    for (const auto& cell : split_csv_line(line)) y.push_back(parse_double(cell));
    front.push_back(std::move(y));
  }
  return front;
}

struct HistoryRow {
  std::size_t index;
  DecisionPoint point;
  std::vector<double> objectives;
  std::vector<double> constraints;
  double h;
};

inline std::vector<HistoryRow> read_history_csv(const std::string& path,
                                                std::size_t n, std::size_t m,
                                                std::size_t j) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file " + path);
  std::vector<HistoryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 1 + n + m + j + 1)
      throw std::runtime_error("bad row width in " + path);
    HistoryRow r;
    r.index = std::stoul(cells[0]);
    std::size_t c = 1;
    for (std::size_t i = 0; i < n; ++i) r.point.push_back(parse_double(cells[c++]));
    for (std::size_t i = 0; i < m; ++i)
      r.objectives.push_back(parse_double(cells[c++]));
    for (std::size_t i = 0; i < j; ++i)
      r.constraints.push_back(parse_double(cells[c++]));
    r.h = parse_double(cells[c]);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void write_profile_csv(const std::string& path,
                              const ProfileTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "solver,groups,fraction\n";
  for (std::size_t s = 0; s < table.solvers.size(); ++s) {
    for (std::size_t k = 0; k < table.max_groups; ++k) {
      out << table.solvers[s] << ',' << k + 1 << ','
          << format_double(table.fraction[s][k], 12) << '\n';
    }
  }
}

inline void write_convergence_csv(const std::string& path,
                                  const std::vector<double>& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "eval,hv_ratio\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << i + 1 << ',' << format_double(series[i], 12) << '\n';
}

}  // namespace momads::io
