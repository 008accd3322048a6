#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "subhc/core/log_domain.hpp"
#include "subhc/core/subspace.hpp"
#include "subhc/criteria/weight_criteria.hpp"

namespace subhc {

/// Two block-weight shifts, each satisfying the weight-product criterion along
/// its own iterates, whose direct sum never has both products small at once.
struct Example32Certificate {
  WeightSequence w;
  WeightSequence a;
  IterateRule w_iterates;
  IterateRule a_iterates;
  Index horizon = 0;
  /// min over 1 <= n <= horizon of log max(∏_{j<n} w_j, ∏_{j<n} a_j), and the
  /// same for the products of inverse weights over the negative indices.
  double min_forward_max_log = 0.0;
  double min_backward_max_log = 0.0;
  Index argmin_forward = 0;
  Index argmin_backward = 0;
  CriterionReport w_report;
  CriterionReport a_report;
  double floor_log = std::log(0.5);
};

/// Blocks of lengths 4^k carrying 1/2 and 2 alternately; `a` is `w` with the
/// phase flipped, so a_j = 1/w_j and the forward products are reciprocal.
/// Verifies the floor by scanning every n <= horizon and checks each component
/// criterion at K = 6, tol 1e-6 before returning.
inline Example32Certificate build_example32_weights(Index horizon) {
  if (horizon < 64) throw std::invalid_argument("example32 horizon must be >= 64");
  Example32Certificate c{WeightSequence::blocks(4, {0.5, 2.0}, 0), WeightSequence::blocks(4, {0.5, 2.0}, 1),
                         BlockEndIterates{4, 0}, BlockEndIterates{4, 1}};
  c.horizon = horizon;
  LogProduct fw, fa, bw, ba;
  c.min_forward_max_log = std::numeric_limits<double>::infinity();
  c.min_backward_max_log = std::numeric_limits<double>::infinity();
  for (Index n = 1; n <= horizon; ++n) {
    fw.multiply(c.w(n - 1));
    fa.multiply(c.a(n - 1));
    bw.multiply(1.0 / c.w(-n));
    ba.multiply(1.0 / c.a(-n));
    const double f = std::max(fw.log(), fa.log());
    const double b = std::max(bw.log(), ba.log());
    if (f < c.min_forward_max_log) {
      c.min_forward_max_log = f;
      c.argmin_forward = n;
    }
    if (b < c.min_backward_max_log) {
      c.min_backward_max_log = b;
      c.argmin_backward = n;
    }
  }
  // Tolerance covers accumulated rounding of exactly representable logs.
  const double slack = 1e-9;
  if (c.min_forward_max_log < c.floor_log - slack) {
    throw ConstructionError("forward floor violated at n = " + std::to_string(c.argmin_forward));
  }
  if (c.min_backward_max_log < c.floor_log - slack) {
    throw ConstructionError("backward floor violated at n = " + std::to_string(c.argmin_backward));
  }
  const auto m = CoordinateSubspace::half_line(SpaceKind::bilateral, 0);
  c.w_report = eval_forward_criterion(WeightedShiftOperator(c.w, SpaceKind::bilateral), m, 0, c.w_iterates, 6, 1e-6);
  c.a_report = eval_forward_criterion(WeightedShiftOperator(c.a, SpaceKind::bilateral), m, 0, c.a_iterates, 6, 1e-6);
  if (c.w_report.verdict != Verdict::satisfied_to_horizon) throw ConstructionError("w fails its own criterion");
  if (c.a_report.verdict != Verdict::satisfied_to_horizon) throw ConstructionError("a fails its own criterion");
  return c;
}

}  // namespace subhc
