#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace gaussrdp::cli {

// Floats at 17 significant digits, "inf" for infinity, so CSV round-trips
// losslessly and diffs cleanly.
inline std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string join_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

}  // namespace gaussrdp::cli
