#pragma once

#include <json.hpp>

#include <sstream>
#include <string>

#include "subhc/core/format.hpp"
#include "subhc/criteria/example32.hpp"
#include "subhc/criteria/report.hpp"
#include "subhc/io/json_num.hpp"
#include "subhc/orbit/witness.hpp"

namespace subhc::io {

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const SparseVector& v) {
  json e = json::array();
  for (const auto& [i, c] : v.entries()) {
    if (c.imag() == 0.0) e.push_back({i, num(c.real())});
    else e.push_back({i, num(c.real()), num(c.imag())});
  }
  return {{"space", to_string(v.kind())}, {"entries", e}};
}

inline json to_json(const DirectSumVector& p) { return {{"left", to_json(p.left)}, {"right", to_json(p.right)}}; }

inline json to_json(const CriterionReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = {{"k", row.k},
              {"n_k", row.n_k},
              {"forward_log", num(row.forward_log)},
              {"backward_log", num(row.backward_log)},
              {"invariant", row.invariant}};
    if (row.approach_log) j["approach_log"] = num(*row.approach_log);
    rows.push_back(j);
  }
  json out = {{"schema", "subhc.criterion/1"}, {"kind", r.kind}, {"verdict", to_string(r.verdict)},
              {"tol", num(r.tol)},             {"horizon", r.horizon}, {"rows", rows},
              {"note", r.note}};
  if (r.witness) {
    out["witness"] = {{"k", r.witness->k}, {"n_k", r.witness->n_k}, {"reason", r.witness->reason},
                      {"sample", r.witness->sample}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

/// Rebuilds a report from JSON; used by the audit to recompute verdicts.
inline CriterionReport criterion_from_json(const json& j) {
  CriterionReport r;
  r.kind = j.at("kind").get<std::string>();
  r.tol = to_double(j.at("tol"));
  r.horizon = j.at("horizon").get<Index>();
  r.note = j.value("note", "");
  for (const auto& row : j.at("rows")) {
    CriterionRow x;
    x.k = row.at("k").get<Index>();
    x.n_k = row.at("n_k").get<Index>();
    x.forward_log = to_double(row.at("forward_log"));
    x.backward_log = to_double(row.at("backward_log"));
    x.invariant = row.at("invariant").get<bool>();
    if (row.contains("approach_log")) x.approach_log = to_double(row.at("approach_log"));
    r.rows.push_back(x);
  }
  // Witnesses other than the trace-derived ones are facts about samples, not
  // recomputable from rows; keep them.
  if (!j.at("witness").is_null()) {
    const auto& w = j.at("witness");
    const std::string reason = w.at("reason").get<std::string>();
    if (reason == "approximant outside M") {
      r.witness = CriterionWitness{w.at("k").get<Index>(), w.at("n_k").get<Index>(), reason, w.value("sample", "")};
    }
  }
  decide(r);
  return r;
}

inline json to_json(const std::vector<OrbitRecord>& records) {
  json rows = json::array();
  for (const auto& r : records) {
    rows.push_back({{"n", r.n},
                    {"support_min", r.support_min},
                    {"support_max", r.support_max},
                    {"support_size", r.support_size},
                    {"log_norm", num(r.log_norm)},
                    {"log_distance", num(r.log_distance)}});
  }
  return rows;
}

template <class V>
json to_json(const OrbitTrace<V>& o) {
  json kept = json::array();
  for (const auto& [n, s] : o.retained()) kept.push_back({{"n", n}, {"exp2", s.exp2}, {"mantissa", to_json(s.mantissa)}});
  return {{"schema", "subhc.orbit/1"}, {"length", o.length()}, {"subspace", o.subspace().describe()},
          {"start", to_json(o.start())}, {"records", to_json(o.records())}, {"retained", kept}};
}

inline json to_json(const DensityReport& d) {
  json e = json::array();
  for (const auto& x : d.entries) {
    e.push_back({{"target", x.target},
                 {"best_distance", num(x.best_distance)},
                 {"witness_step", x.witness_step},
                 {"covered", x.covered}});
  }
  return {{"schema", "subhc.density/1"}, {"eps", num(d.eps)}, {"net", d.net}, {"horizon", d.horizon},
          {"coverage", num(d.coverage)},  {"entries", e}};
}

inline json to_json(const ReturnSet& r) {
  return {{"schema", "subhc.returnset/1"},
          {"horizon", r.horizon},
          {"members", r.members},
          {"size", r.members.size()},
          {"classification", to_string(r.classification)},
          {"n0", r.n0 ? json(*r.n0) : json(nullptr)},
          {"calibration",
           {{"cofinite_tail_fraction", r.calibration.cofinite_tail_fraction},
            {"infinite_fraction", r.calibration.infinite_fraction}}}};
}

template <class V>
json to_json(const TransitivityWitness<V>& w) {
  return {{"schema", "subhc.witness/1"}, {"z", to_json(w.z)},       {"err_near", num(w.err_near)},
          {"err_far", num(w.err_far)},    {"invariant_ok", w.invariant_ok}, {"z_in_m", w.z_in_m}};
}

inline json to_json(const Example32Certificate& c) {
  return {{"schema", "subhc.example32/1"},
          {"horizon", c.horizon},
          {"w", "blocks(4^k, [0.5, 2], phase 0, reciprocal_mirror)"},
          {"a", "blocks(4^k, [0.5, 2], phase 1, reciprocal_mirror)"},
          {"w_iterates", describe(c.w_iterates)},
          {"a_iterates", describe(c.a_iterates)},
          {"floor_log", num(c.floor_log)},
          {"min_forward_max_log", num(c.min_forward_max_log)},
          {"argmin_forward", c.argmin_forward},
          {"min_backward_max_log", num(c.min_backward_max_log)},
          {"argmin_backward", c.argmin_backward},
          {"w_report", to_json(c.w_report)},
          {"a_report", to_json(c.a_report)}};
}

inline json to_json(const OverlapReport& r) {
  return {{"horizon", r.horizon}, {"overlap", r.overlap}, {"disjoint", r.disjoint}};
}

// ---------------------------------------------------------------------------
// CSV (stable column order, header always written)

inline std::string csv(const CriterionReport& r) {
  const bool approach = !r.rows.empty() ? r.rows.front().approach_log.has_value()
                                        : (r.kind == "subspace" || r.kind == "subspace_pair");
  std::ostringstream o;
  o << "k,n_k,forward_log,backward_log,invariant" << (approach ? ",approach_log" : "") << "\n";
  for (const auto& x : r.rows) {
    o << x.k << ',' << x.n_k << ',' << detail::fmt_double(x.forward_log) << ',' << detail::fmt_double(x.backward_log)
      << ',' << (x.invariant ? "true" : "false");
    if (approach) o << ',' << detail::fmt_double(x.approach_log.value_or(0.0));
    o << "\n";
  }
  return o.str();
}

inline std::string csv(const std::vector<OrbitRecord>& records) {
  std::ostringstream o;
  o << "n,support_min,support_max,support_size,log_norm,log_distance\n";
  for (const auto& r : records) {
    o << r.n << ',' << r.support_min << ',' << r.support_max << ',' << r.support_size << ','
      << detail::fmt_double(r.log_norm) << ',' << detail::fmt_double(r.log_distance) << "\n";
  }
  return o.str();
}

inline std::string csv(const DensityReport& d) {
  std::ostringstream o;
  o << "target,best_distance,witness_step,covered\n";
  for (const auto& e : d.entries) {
    o << e.target << ',' << detail::fmt_double(e.best_distance) << ',' << e.witness_step << ','
      << (e.covered ? "true" : "false") << "\n";
  }
  return o.str();
}

inline std::string csv(const ReturnSet& r) {
  std::ostringstream o;
  o << "n\n";
  for (Index n : r.members) o << n << "\n";
  return o.str();
}

}  // namespace subhc::io
