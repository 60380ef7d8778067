#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace semilevy {

/// Shortest text that round-trips a double ("%.17g").
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Compact form for human-facing summaries.
inline std::string format_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

} // namespace semilevy
