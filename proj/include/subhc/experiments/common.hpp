#pragma once

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "subhc/experiments/experiment_report.hpp"
#include "subhc/io/config.hpp"
#include "subhc/io/json_num.hpp"

namespace subhc::experiments {

using json = nlohmann::json;

/// mt19937_64 with a fixed u64 -> double mapping, so streams are identical
/// across standard libraries (std::uniform_real_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  /// Uniform in [0, n); modulo bias is irrelevant at these sizes.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

 private:
  std::mt19937_64 gen_;
};

inline std::uint64_t seed_of(const json& cfg) {
  return cfg.contains("seed") ? static_cast<std::uint64_t>(config::integer(cfg.at("seed"), "/seed")) : 20240611u;
}

inline const json& section(const json& cfg, const std::string& key, const json& fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : *it;
}

inline std::string path(const json& cfg, const std::string& key) {
  return cfg.contains(key) ? "/" + key : "/(default " + key + ")";
}

inline json as_json(const std::vector<Index>& v) { return json(v); }

inline json as_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(io::num(x));
  return out;
}

}  // namespace subhc::experiments
