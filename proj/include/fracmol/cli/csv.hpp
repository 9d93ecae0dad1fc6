// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracmol/error.hpp"

namespace fracmol::cli {

/// Fixed-width-free decimal text for a double, independent of locale.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string fmt(long v) { return std::to_string(v); }
inline std::string fmt(int v) { return std::to_string(v); }

/// One CSV document: a '#' parameter echo, a header line, then rows.
struct Table {
  std::string echo;
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != headers.size()) throw std::logic_error("csv: row width differs from header");
    rows.push_back(std::move(row));
  }

  void write(std::ostream& out) const {
    out << "# " << echo << '\n';
    for (std::size_t k = 0; k < headers.size(); ++k) out << (k ? "," : "") << headers[k];
    out << '\n';
    for (const auto& r : rows) {
      for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << r[k];
      out << '\n';
    }
  }

  void write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot write " + path);
    write(f);
  }
};

}  // namespace fracmol::cli
