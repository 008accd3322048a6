#pragma once

#include <algorithm>
#include <iterator>

#include "subhc/experiments/common.hpp"
#include "subhc/orbit/witness.hpp"

namespace subhc::experiments {

namespace detail {
inline std::vector<Index> intersect(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::size_t missing_from(const std::vector<Index>& needed, const std::vector<Index>& have) {
  std::vector<Index> out;
  std::set_difference(needed.begin(), needed.end(), have.begin(), have.end(), std::back_inserter(out));
  return out.size();
}

inline json return_json(const ReturnSet& r) {
  return {{"members", r.members},
          {"size", r.members.size()},
          {"classification", to_string(r.classification)},
          {"n0", r.n0 ? json(*r.n0) : json(nullptr)}};
}
}  // namespace detail

/// Return sets of a mixing operator, a merely transitive one and their direct
/// sum, plus a pair of mixing operators for the both-mixing equivalence.
inline ExperimentReport run_mixing_experiment(const json& cfg) {
  static const json def_mix = {{"type", "shift"}, {"weights", {{"kind", "piecewise"}, {"pos", 0.5}, {"neg", 2}}}};
  static const json def_tr = {{"type", "shift"},
                              {"weights", {{"kind", "blocks"}, {"length_rule", "4^k"}, {"values", {0.5, 2}}, {"phase", 0}}}};
  static const json def_mix2 = {{"type", "shift"},
                                {"weights", {{"kind", "piecewise"}, {"pos", 0.3333333333333333}, {"neg", 3}}}};
  static const json def_m = {{"kind", "full"}};
  static const json def_c = {{"entries", {{0, 1}}}};
  ExperimentReport rep;
  rep.name = "mixing";
  rep.config = cfg;
  const OperatorExpr t1 = config::op(section(cfg, "mixing_operator", def_mix), path(cfg, "mixing_operator"));
  const OperatorExpr t2 = config::op(section(cfg, "transitive_operator", def_tr), path(cfg, "transitive_operator"));
  const OperatorExpr t3 = config::op(section(cfg, "second_mixing_operator", def_mix2), path(cfg, "second_mixing_operator"));
  const CoordinateSubspace m1 = config::subspace(section(cfg, "mixing_subspace", def_m), path(cfg, "mixing_subspace"));
  const CoordinateSubspace m2 = config::subspace(section(cfg, "transitive_subspace", def_m), path(cfg, "transitive_subspace"));
  const SparseVector c1 = config::vector(section(cfg, "mixing_center", def_c), path(cfg, "mixing_center"));
  const SparseVector c2 = config::vector(section(cfg, "transitive_center", def_c), path(cfg, "transitive_center"));
  const double radius = config::num_or(cfg, "radius", 0.5, "");
  const Index horizon = config::int_or(cfg, "horizon", 2000, "");
  const double tol = config::num_or(cfg, "tol", 1e-12, "");
  const double max_n0 = config::num_or(cfg, "max_n0", 200, "");
  const double min_transitive = config::num_or(cfg, "min_transitive_size", 50, "");
  ReturnCalibration cal;
  cal.cofinite_tail_fraction = config::num_or(cfg, "cofinite_tail_fraction", cal.cofinite_tail_fraction, "");
  cal.infinite_fraction = config::num_or(cfg, "infinite_fraction", cal.infinite_fraction, "");

  const ReturnSet r1 = return_set<SparseVector>(t1, m1, c1, radius, c1, radius, horizon, tol, cal);
  const ReturnSet r2 = return_set<SparseVector>(t2, m2, c2, radius, c2, radius, horizon, tol, cal);
  const DirectSumVector c12{c1, c2};
  const ReturnSet r12 = return_set<DirectSumVector>(OperatorExpr::direct_sum(t1, t2), DirectSumSubspace{m1, m2}, c12,
                                                    radius, c12, radius, horizon, tol, cal);
  const auto both = detail::intersect(r1.members, r2.members);
  std::vector<Index> tail_r2;
  const Index n0 = r1.n0.value_or(horizon + 1);
  for (Index n : r2.members) {
    if (n >= n0) tail_r2.push_back(n);
  }

  const auto und = CheckVerdict::undecided;
  rep.checks.push_back(make_check("mixing_is_cofinite", r1.classification == ReturnClass::cofinite_beyond ? 1 : 0, "==",
                                  1, "classification at horizon", und));
  rep.checks.push_back(make_check("mixing_n0", r1.n0 ? static_cast<double>(*r1.n0) : std::numeric_limits<double>::infinity(),
                                  "<=", max_n0, "", und));
  rep.checks.push_back(make_check("transitive_is_infinite",
                                  r2.classification == ReturnClass::infinite_to_horizon ? 1 : 0, "==", 1,
                                  "classification at horizon", und));
  rep.checks.push_back(make_check("transitive_size", static_cast<double>(r2.members.size()), ">=", min_transitive));
  rep.checks.push_back(make_check("sum_contains_intersection", static_cast<double>(detail::missing_from(both, r12.members)),
                                  "==", 0, "|R1 ∩ R2 \\ R12|"));
  rep.checks.push_back(make_check("mixing_contains_transitive_tail",
                                  static_cast<double>(detail::missing_from(tail_r2, r1.members)), "==", 0,
                                  "|R2 ∩ [N0, H] \\ R1|"));

  // Both mixing: R12 cofinite iff R1 and R3 cofinite.
  const SparseVector& c3 = c1;
  const ReturnSet r3 = return_set<SparseVector>(t3, m1, c3, radius, c3, radius, horizon, tol, cal);
  const DirectSumVector c13{c1, c3};
  const ReturnSet r13 = return_set<DirectSumVector>(OperatorExpr::direct_sum(t1, t3), DirectSumSubspace{m1, m1}, c13,
                                                    radius, c13, radius, horizon, tol, cal);
  const bool lhs = r13.classification == ReturnClass::cofinite_beyond;
  const bool rhs = r1.classification == ReturnClass::cofinite_beyond && r3.classification == ReturnClass::cofinite_beyond;
  rep.checks.push_back(make_check("both_mixing_equivalence", lhs == rhs ? 1 : 0, "==", 1));
  rep.checks.push_back(make_check("both_mixing_sum_cofinite", lhs ? 1 : 0, "==", 1, "", und));
  if (r1.members.empty() || r2.members.empty()) rep.note = "an input return set is empty; the inclusion is vacuous";

  rep.traces["mixing"] = detail::return_json(r1);
  rep.traces["transitive"] = detail::return_json(r2);
  rep.traces["direct_sum"] = detail::return_json(r12);
  rep.traces["second_mixing"] = detail::return_json(r3);
  rep.traces["both_mixing_sum"] = detail::return_json(r13);
  rep.finish();
  return rep;
}

}  // namespace subhc::experiments
