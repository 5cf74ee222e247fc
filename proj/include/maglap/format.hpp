#pragma once

#include <cstdio>
#include <string>

namespace maglap {

/// Shortest-safe fixed format for reproducible text output: 17 significant digits.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace maglap
