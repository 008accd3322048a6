#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "subhc/core/errors.hpp"
#include "subhc/core/subspace.hpp"
#include "subhc/criteria/iterates.hpp"
#include "subhc/criteria/subspace_criterion.hpp"
#include "subhc/shift/operator.hpp"

namespace subhc::config {

using json = nlohmann::json;

// Every parser takes the JSON value and its JSON-pointer path so errors can
// name the offending location.

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw ConfigError((path.empty() ? "/" : path) + ": " + msg, path);
}

inline const json& req(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field \"" + key + "\"");
  return *it;
}

inline double num(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

inline Index integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<Index>();
}

inline std::string str(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

inline double num_or(const json& j, const std::string& key, double def, const std::string& path) {
  return j.contains(key) ? num(j.at(key), path + "/" + key) : def;
}

inline Index int_or(const json& j, const std::string& key, Index def, const std::string& path) {
  return j.contains(key) ? integer(j.at(key), path + "/" + key) : def;
}

inline std::string str_or(const json& j, const std::string& key, const std::string& def, const std::string& path) {
  return j.contains(key) ? str(j.at(key), path + "/" + key) : def;
}

inline std::vector<double> num_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(num(j[i], path + "/" + std::to_string(i)));
  return out;
}

inline std::vector<Index> int_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<Index> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], path + "/" + std::to_string(i)));
  return out;
}

/// A number, or [re, im].
inline Coeff coeff(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {num(j[0], path + "/0"), num(j[1], path + "/1")};
  fail(path, "expected a number or [re, im]");
}

inline SpaceKind space(const json& j, const std::string& path) {
  const std::string s = j.contains("space") ? str(j.at("space"), path + "/space") : "bilateral";
  if (s == "bilateral") return SpaceKind::bilateral;
  if (s == "unilateral") return SpaceKind::unilateral;
  fail(path + "/space", "expected \"bilateral\" or \"unilateral\"");
}

template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

inline WeightSequence weights(const json& j, const std::string& path) {
  const std::string kind = str(req(j, "kind", path), path + "/kind");
  return guarded(path, [&]() -> WeightSequence {
    if (kind == "constant") return WeightSequence::constant(num(req(j, "c", path), path + "/c"));
    if (kind == "piecewise") {
      return WeightSequence::piecewise(num(req(j, "pos", path), path + "/pos"), num(req(j, "neg", path), path + "/neg"));
    }
    if (kind == "blocks") {
      const std::string rule = str_or(j, "length_rule", "4^k", path);
      Index base = 0;
      if (rule.size() < 3 || rule.substr(rule.size() - 2) != "^k") fail(path + "/length_rule", "expected \"<base>^k\"");
      try {
        std::size_t used = 0;
        base = std::stoll(rule.substr(0, rule.size() - 2), &used);
        if (used != rule.size() - 2) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        fail(path + "/length_rule", "expected \"<base>^k\"");
      }
      const std::string neg = str_or(j, "negative", "reciprocal_mirror", path);
      NegativeSide side = NegativeSide::reciprocal_mirror;
      if (neg == "mirror") side = NegativeSide::mirror;
      else if (neg != "reciprocal_mirror") fail(path + "/negative", "expected \"reciprocal_mirror\" or \"mirror\"");
      return WeightSequence::blocks(base, num_list(req(j, "values", path), path + "/values"),
                                    int_or(j, "phase", 0, path), side);
    }
    if (kind == "table") {
      return WeightSequence::table(int_or(j, "start", 0, path), num_list(req(j, "window", path), path + "/window"),
                                   num_or(j, "default", 1.0, path));
    }
    fail(path + "/kind", "unknown weight kind \"" + kind + "\"");
  });
}

inline OperatorExpr op(const json& j, const std::string& path) {
  const std::string type = str(req(j, "type", path), path + "/type");
  if (type == "shift") return OperatorExpr::shift(weights(req(j, "weights", path), path + "/weights"), space(j, path));
  if (type == "forward") return OperatorExpr::forward(space(j, path));
  if (type == "backward") return OperatorExpr::backward(j.contains("space") ? space(j, path) : SpaceKind::unilateral);
  if (type == "identity") return OperatorExpr::identity();
  if (type == "scalar") return OperatorExpr::scalar(coeff(req(j, "c", path), path + "/c"), op(req(j, "of", path), path + "/of"));
  if (type == "power") return OperatorExpr::power(op(req(j, "of", path), path + "/of"), integer(req(j, "n", path), path + "/n"));
  if (type == "compose") {
    return OperatorExpr::compose(op(req(j, "outer", path), path + "/outer"), op(req(j, "inner", path), path + "/inner"));
  }
  if (type == "direct_sum") {
    return OperatorExpr::direct_sum(op(req(j, "left", path), path + "/left"), op(req(j, "right", path), path + "/right"));
  }
  if (type == "rolewicz") return OperatorExpr::rolewicz(coeff(req(j, "lambda", path), path + "/lambda"));
  fail(path + "/type", "unknown operator type \"" + type + "\"");
}

/// The weighted shift inside {"type":"shift",...}.
inline WeightedShiftOperator shift(const json& j, const std::string& path) {
  if (str(req(j, "type", path), path + "/type") != "shift") fail(path + "/type", "expected a weighted shift");
  return WeightedShiftOperator(weights(req(j, "weights", path), path + "/weights"), space(j, path));
}

inline CoordinateSubspace subspace(const json& j, const std::string& path) {
  const std::string kind = str(req(j, "kind", path), path + "/kind");
  const SpaceKind sk = space(j, path);
  CoordinateSubspace m = guarded(path, [&] {
    if (kind == "residues") {
      return CoordinateSubspace::residues(sk, integer(req(j, "modulus", path), path + "/modulus"),
                                          int_list(req(j, "residues", path), path + "/residues"));
    }
    if (kind == "half_line") return CoordinateSubspace::half_line(sk, integer(req(j, "start", path), path + "/start"));
    if (kind == "explicit") return CoordinateSubspace::explicit_set(sk, int_list(req(j, "indices", path), path + "/indices"));
    if (kind == "full") return CoordinateSubspace::full(sk);
    fail(path + "/kind", "unknown subspace kind \"" + kind + "\"");
  });
  if (j.contains("complement") && boolean(j.at("complement"), path + "/complement")) m = m.complement();
  return m;
}

inline DirectSumSubspace pair_subspace(const json& j, const std::string& path) {
  return {subspace(req(j, "left", path), path + "/left"), subspace(req(j, "right", path), path + "/right")};
}

inline SparseVector vector(const json& j, const std::string& path) {
  const SpaceKind sk = space(j, path);
  const json& e = req(j, "entries", path);
  if (!e.is_array()) fail(path + "/entries", "expected an array of [index, re] or [index, re, im]");
  SparseVector v(sk);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string p = path + "/entries/" + std::to_string(i);
    if (!e[i].is_array() || (e[i].size() != 2 && e[i].size() != 3)) fail(p, "expected [index, re] or [index, re, im]");
    const Index idx = integer(e[i][0], p + "/0");
    const Coeff c(num(e[i][1], p + "/1"), e[i].size() == 3 ? num(e[i][2], p + "/2") : 0.0);
    guarded(p, [&] {
      v.add(idx, c);
      return 0;
    });
  }
  return v;
}

inline DirectSumVector pair_vector(const json& j, const std::string& path) {
  return {vector(req(j, "left", path), path + "/left"), vector(req(j, "right", path), path + "/right")};
}

inline IterateRule iterates(const json& j, const std::string& path) {
  const std::string rule = str(req(j, "rule", path), path + "/rule");
  IterateRule r;
  if (rule == "linear") r = LinearIterates{int_or(j, "scale", 1, path), int_or(j, "offset", 0, path)};
  else if (rule == "block_ends") r = BlockEndIterates{int_or(j, "base", 4, path), int_or(j, "parity", 0, path)};
  else if (rule == "list") r = ListIterates{int_list(req(j, "values", path), path + "/values")};
  else fail(path + "/rule", "unknown iterate rule \"" + rule + "\"");
  guarded(path, [&] {
    validate(r);
    return 0;
  });
  return r;
}

inline DenseSetSpec dense_set(const json& j, const std::string& path) {
  const std::string kind = str(req(j, "kind", path), path + "/kind");
  CoordinateSubspace m = subspace(req(j, "subspace", path), path + "/subspace");
  if (kind == "net") {
    const Index sup = int_or(j, "max_support", 1, path);
    if (sup < 1) fail(path + "/max_support", "must be >= 1");
    return NetDenseSet{m, static_cast<std::size_t>(sup), num_list(req(j, "grid", path), path + "/grid"),
                       num_or(j, "radius_cap", 1.0, path)};
  }
  if (kind == "explicit") {
    const json& s = req(j, "samples", path);
    if (!s.is_array()) fail(path + "/samples", "expected an array of vectors");
    std::vector<SparseVector> v;
    for (std::size_t i = 0; i < s.size(); ++i) v.push_back(vector(s[i], path + "/samples/" + std::to_string(i)));
    return ExplicitDenseSet{m, v};
  }
  fail(path + "/kind", "unknown dense-set kind \"" + kind + "\"");
}

inline ApproxRule approximants(const json& j, const std::string& path) {
  const std::string rule = str(req(j, "rule", path), path + "/rule");
  if (rule == "inverse_power") return InversePowerApprox{};
  if (rule == "zero") return ZeroApprox{};
  fail(path + "/rule", "unknown approximant rule \"" + rule + "\"");
}

inline CriterionData<SparseVector> criterion_data(const json& j, const std::string& path) {
  return {iterates(req(j, "iterates", path), path + "/iterates"), dense_set(req(j, "dense_1", path), path + "/dense_1"),
          dense_set(req(j, "dense_2", path), path + "/dense_2"),
          j.contains("approximants") ? approximants(j.at("approximants"), path + "/approximants")
                                     : ApproxRule{InversePowerApprox{}}};
}

/// 1-based line of the value at `pointer` inside `text`, found by walking the
/// pointer's keys through the source. Falls back to the deepest key found,
/// or line 1 for the document root.
inline int line_of(const std::string& text, const std::string& pointer) {
  std::size_t pos = 0;
  std::size_t start = 1;
  if (pointer.empty() || pointer == "/") return 1;
  while (start <= pointer.size()) {
    std::size_t end = pointer.find('/', start);
    if (end == std::string::npos) end = pointer.size();
    const std::string token = pointer.substr(start, end - start);
    const bool numeric = !token.empty() && token.find_first_not_of("0123456789") == std::string::npos;
    if (!numeric) {
      const std::size_t at = text.find("\"" + token + "\"", pos);
      if (at == std::string::npos) break;
      pos = at;
    }
    start = end + 1;
  }
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

/// Parses JSON text; syntax errors become ConfigError with a line number.
inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const int line = 1 + static_cast<int>(std::count(text.begin(),
                                                     text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size())),
                                                     '\n'));
    throw ConfigError(e.what(), "", line);
  }
}

}  // namespace subhc::config
