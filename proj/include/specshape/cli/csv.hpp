#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace specshape::cli {

// Deterministic CSV cell formatting: fixed "%.12g" for numbers, NaN as an
// empty cell.  Keeps identical runs byte-identical.
inline std::string csv_num(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_num(long long v) { return std::to_string(v); }
inline std::string csv_num(unsigned long long v) { return std::to_string(v); }
inline std::string csv_num(int v) { return std::to_string(v); }

inline void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

}  // namespace specshape::cli
