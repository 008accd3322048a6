#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace subhc::detail {

/// Shortest-round-trip-safe decimal text; infinities as "inf" / "-inf".
inline std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace subhc::detail
