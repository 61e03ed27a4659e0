#pragma once

// File I/O: full-precision CSV serialization of trajectories and rate
// tables, atomic text writes, and exact step-size parsing.

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hisd/convergence.hpp"
#include "hisd/dynamics.hpp"
#include "hisd/landscape.hpp"
#include "hisd/linalg.hpp"

namespace hisd {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& detail) : std::runtime_error(detail) {}
};

/// 17 significant digits: enough for exact double round trips.
inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes via a temporary file in the target directory plus rename, so
/// readers never observe a partially written file.
inline void atomic_write_text(const std::filesystem::path& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  static std::atomic<unsigned> serial{0};
  const fs::path dir =
      path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::ostringstream name;
  name << path.filename().string() << ".tmp." << ::getpid() << "."
       << serial.fetch_add(1);
  const fs::path tmp = dir / name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("rename to " + path.string() + " failed: " + ec.message());
  }
}

/// Header t,x1..xN,v1_1..v1_N,...,vk_1..vk_N[,energy]; one row per record.
inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const Trajectory& traj,
                                 const EnergyLandscape* landscape = nullptr) {
  if (traj.records.empty()) throw std::invalid_argument("empty trajectory");
  const std::size_t n = traj.records.front().state.x.size();
  const std::size_t k = traj.params.k;

  std::string text = "t";
  for (std::size_t d = 1; d <= n; ++d) text += ",x" + std::to_string(d);
  for (std::size_t i = 1; i <= k; ++i)
    for (std::size_t d = 1; d <= n; ++d)
      text += ",v" + std::to_string(i) + "_" + std::to_string(d);
  if (landscape) text += ",energy";
  text += "\n";

  for (const StepRecord& rec : traj.records) {
    text += format_full(rec.state.t);
    for (std::size_t d = 0; d < n; ++d)
      text += "," + format_full(rec.state.x[d]);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t d = 0; d < n; ++d)
        text += "," + format_full(rec.state.frame[i][d]);
    if (landscape) text += "," + format_full(landscape->energy(rec.state.x));
    text += "\n";
  }
  atomic_write_text(path, text);
}

/// Parsed trajectory CSV; shape recovered from the header.
struct TrajectoryFile {
  std::size_t dimension = 0;
  std::size_t k = 0;
  bool has_energy = false;
  struct Row {
    double t = 0.0;
    Vec x;
    std::vector<Vec> v;
    double energy = 0.0;
  };
  std::vector<Row> rows;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline double parse_csv_number(const std::string& field,
                               const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw IoError("malformed number '" + field + "' in " + where);
  }
}

}  // namespace detail

inline TrajectoryFile read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file " + path.string());
  const std::vector<std::string> header = detail::split_csv_line(line);

  TrajectoryFile file;
  std::size_t pos = 0;
  if (header.empty() || header[pos] != "t")
    throw IoError("trajectory header must start with t");
  ++pos;
  while (pos < header.size() &&
         header[pos] == "x" + std::to_string(file.dimension + 1)) {
    ++file.dimension;
    ++pos;
  }
  if (file.dimension == 0) throw IoError("trajectory header has no x columns");
  while (pos < header.size() && !header[pos].empty() &&
         header[pos][0] == 'v') {
    const std::string want_prefix = "v" + std::to_string(file.k + 1) + "_";
    for (std::size_t d = 1; d <= file.dimension; ++d, ++pos) {
      if (pos >= header.size() ||
          header[pos] != want_prefix + std::to_string(d))
        throw IoError("trajectory header has inconsistent v columns");
    }
    ++file.k;
  }
  if (pos < header.size() && header[pos] == "energy") {
    file.has_energy = true;
    ++pos;
  }
  if (pos != header.size())
    throw IoError("trajectory header has unexpected trailing columns");

  const std::size_t expected =
      1 + file.dimension * (1 + file.k) + (file.has_energy ? 1 : 0);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = detail::split_csv_line(line);
    if (fields.size() != expected)
      throw IoError("row " + std::to_string(line_no) + " has " +
                    std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(expected));
    const std::string where = path.string() + ":" + std::to_string(line_no);
    TrajectoryFile::Row row;
    std::size_t f = 0;
    row.t = detail::parse_csv_number(fields[f++], where);
    row.x.resize(file.dimension);
    for (std::size_t d = 0; d < file.dimension; ++d)
      row.x[d] = detail::parse_csv_number(fields[f++], where);
    row.v.assign(file.k, Vec(file.dimension));
    for (std::size_t i = 0; i < file.k; ++i)
      for (std::size_t d = 0; d < file.dimension; ++d)
        row.v[i][d] = detail::parse_csv_number(fields[f++], where);
    if (file.has_energy)
      row.energy = detail::parse_csv_number(fields[f++], where);
    file.rows.push_back(std::move(row));
  }
  return file;
}

/// Header tau,err_x,rate_x,err_v1,rate_v1,...; rate cells are empty on the
/// first row and wherever a rate is undefined.
inline void write_rate_table_csv(const std::filesystem::path& path,
                                 const RateTable& table) {
  const std::size_t k = table.config.k;
  std::string text = "tau,err_x,rate_x";
  for (std::size_t i = 1; i <= k; ++i) {
    text += ",err_v" + std::to_string(i);
    text += ",rate_v" + std::to_string(i);
  }
  text += "\n";
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const ErrorReport& r = table.rows[row];
    const auto rate_cell = [&](std::size_t column) -> std::string {
      if (row == 0) return "";
      const double rate = table.rates[row - 1][column];
      return std::isfinite(rate) ? format_full(rate) : std::string();
    };
    text += format_full(r.tau);
    text += "," + format_full(r.err_x) + "," + rate_cell(0);
    for (std::size_t i = 0; i < k; ++i)
      text += "," + format_full(r.err_v[i]) + "," + rate_cell(1 + i);
    text += "\n";
  }
  atomic_write_text(path, text);
}

/// Parses a step size given either as an exact rational "p/q" or as a
/// decimal. Rationals avoid decimal parse drift for dyadic steps.
inline double parse_tau(const std::string& text) {
  const auto fail = [&]() -> double {
    throw std::invalid_argument("invalid step size '" + text +
                                "': expected a positive rational like 1/256 "
                                "or a positive decimal");
  };
  const auto parse_integer = [&](const std::string& part) -> long long {
    std::size_t pos = 0;
    long long value = 0;
    try {
      value = std::stoll(part, &pos);
    } catch (const std::exception&) {
      fail();
    }
    if (pos != part.size()) fail();
    return value;
  };

  if (text.empty()) return fail();
  const std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    const long long p = parse_integer(text.substr(0, slash));
    const long long q = parse_integer(text.substr(slash + 1));
    if (p <= 0 || q <= 0) return fail();
    return static_cast<double>(p) / static_cast<double>(q);
  }
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    fail();
  }
  if (pos != text.size() || !(v > 0.0) || !std::isfinite(v)) return fail();
  return v;
}

}  // namespace hisd
