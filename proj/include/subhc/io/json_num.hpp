#pragma once

#include <json.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace subhc::io {

using json = nlohmann::json;

/// JSON has no infinities: ±inf and nan travel as the strings "inf", "-inf", "nan".
inline json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  return x;
}

inline double to_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("not a serialized number: " + j.dump());
}

}  // namespace subhc::io
