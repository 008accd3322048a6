#pragma once

#include <algorithm>
#include <string>

#include "subhc/core/subspace.hpp"
#include "subhc/criteria/iterates.hpp"
#include "subhc/criteria/report.hpp"
#include "subhc/shift/operator.hpp"

namespace subhc {

/// Weight-product transitivity test for one invertible bilateral shift at the
/// basis vector e_m: per k, log ∏ forward weights and log ∏ inverse weights
/// over n_k steps, plus T^{n_k} M ⊆ M.
inline CriterionReport eval_forward_criterion(const WeightedShiftOperator& t, const CoordinateSubspace& m, Index base,
                                              const IterateRule& iterates, Index horizon, double tol = 1e-6,
                                              BackwardConvention convention = BackwardConvention::thm12) {
  if (m.kind() != t.kind()) throw SpaceMismatch("operator and subspace live in different spaces");
  if (!m.contains(base)) throw PreconditionError("basis vector e_" + std::to_string(base) + " is not in M");
  if (!t.invertible()) throw NotInvertible("weight-product criterion needs an invertible bilateral shift");
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  CriterionReport r;
  r.kind = "forward";
  r.tol = tol;
  r.horizon = horizon;
  r.note = "backward_index_convention=" + std::string(to_string(convention));
  const OperatorExpr e = OperatorExpr::shift(t);
  const auto ns = first_iterates(iterates, horizon);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const Index n = ns[i];
    CriterionRow row;
    row.k = static_cast<Index>(i) + 1;
    row.n_k = n;
    row.forward_log = shift_power_norm(t, base, n, Direction::forward);
    row.backward_log = shift_power_norm(t, base, n, Direction::backward, convention);
    row.invariant = invariance_check(e, m, n) == Decision::yes;
    r.rows.push_back(row);
  }
  decide(r);
  if (r.witness) r.witness->sample = "e_" + std::to_string(base);
  return r;
}

/// Direct-sum version: per k the max of the two forward products and the max
/// of the two backward products, with joint invariance.
inline CriterionReport eval_direct_sum_criterion(const WeightedShiftOperator& t1, const WeightedShiftOperator& t2,
                                                 const CoordinateSubspace& m1, const CoordinateSubspace& m2,
                                                 Index m, Index h, const IterateRule& iterates, Index horizon,
                                                 double tol = 1e-6,
                                                 BackwardConvention convention = BackwardConvention::thm12) {
  const CriterionReport a = eval_forward_criterion(t1, m1, m, iterates, horizon, tol, convention);
  const CriterionReport b = eval_forward_criterion(t2, m2, h, iterates, horizon, tol, convention);
  CriterionReport r;
  r.kind = "direct_sum";
  r.tol = tol;
  r.horizon = horizon;
  r.note = a.note;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CriterionRow row = a.rows[i];
    row.forward_log = std::max(a.rows[i].forward_log, b.rows[i].forward_log);
    row.backward_log = std::max(a.rows[i].backward_log, b.rows[i].backward_log);
    row.invariant = a.rows[i].invariant && b.rows[i].invariant;
    r.rows.push_back(row);
  }
  decide(r);
  if (r.witness) r.witness->sample = "(e_" + std::to_string(m) + ", e_" + std::to_string(h) + ")";
  return r;
}

struct OverlapReport {
  std::vector<Index> overlap;
  bool disjoint = true;
  Index horizon = 0;
};

/// Common iterates of two rules up to `horizon`.
inline OverlapReport common_subsequence_report(const IterateRule& a, const IterateRule& b, Index horizon) {
  const auto xa = iterates_up_to(a, horizon);
  const auto xb = iterates_up_to(b, horizon);
  OverlapReport r;
  r.horizon = horizon;
  std::set_intersection(xa.begin(), xa.end(), xb.begin(), xb.end(), std::back_inserter(r.overlap));
  r.disjoint = r.overlap.empty();
  return r;
}

}  // namespace subhc
