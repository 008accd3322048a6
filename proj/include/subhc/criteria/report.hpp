#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "subhc/core/format.hpp"
#include "subhc/core/sparse_vector.hpp"

namespace subhc {

enum class Verdict { satisfied_to_horizon, violated, undecided };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied_to_horizon:
      return "satisfied_to_horizon";
    case Verdict::violated:
      return "violated";
    default:
      return "undecided";
  }
}

/// One k of a criterion evaluation. All magnitudes are natural logs; -inf
/// encodes an exact zero.
///
/// Weight-product criteria: forward_log / backward_log are the two products.
/// Subspace criterion: forward_log = max log‖T^{n_k}x‖ over the first dense set,
/// backward_log = max log‖x_k‖ and approach_log = max log‖T^{n_k}x_k - y‖ over
/// the second.
struct CriterionRow {
  Index k = 0;
  Index n_k = 0;
  double forward_log = 0.0;
  double backward_log = 0.0;
  bool invariant = true;
  std::optional<double> approach_log;
  friend bool operator==(const CriterionRow&, const CriterionRow&) = default;
};

struct CriterionWitness {
  Index k = 0;
  Index n_k = 0;
  std::string reason;
  std::string sample;
  friend bool operator==(const CriterionWitness&, const CriterionWitness&) = default;
};

struct CriterionReport {
  std::string kind;
  Verdict verdict = Verdict::undecided;
  std::vector<CriterionRow> rows;
  std::optional<CriterionWitness> witness;
  double tol = 1e-6;
  Index horizon = 0;
  std::string note;
};

namespace detail {
// A trace has settled when its last value is <= log(tol) and it is eventually
// decreasing: across the later half each step either does not increase
// (relative slack 1e-12) or already lies at or below log(tol).
inline bool settled(const std::vector<double>& trace, double log_tol) {
  if (trace.empty() || !(trace.back() <= log_tol)) return false;
  for (std::size_t i = trace.size() / 2 + 1; i < trace.size(); ++i) {
    const double prev = trace[i - 1];
    const double slack = std::isfinite(prev) ? 1e-12 * std::max(1.0, std::abs(prev)) : 0.0;
    if (!(trace[i] <= prev + slack || trace[i] <= log_tol)) return false;
  }
  return true;
}
}  // namespace detail

/// Sets verdict and witness from the rows. Rows with a failed invariance flag
/// or an explicit witness already recorded make the report violated.
inline void decide(CriterionReport& r) {
  if (r.witness) {
    r.verdict = Verdict::violated;
    return;
  }
  if (r.rows.empty()) {
    r.verdict = Verdict::undecided;
    return;
  }
  for (const auto& row : r.rows) {
    if (!row.invariant) {
      r.verdict = Verdict::violated;
      r.witness = CriterionWitness{row.k, row.n_k, "invariance fails at n_k", ""};
      return;
    }
  }
  const double log_tol = std::log(r.tol);
  auto column = [&](auto get) {
    std::vector<double> out;
    for (const auto& row : r.rows) out.push_back(get(row));
    return out;
  };
  const auto fwd = column([](const CriterionRow& x) { return x.forward_log; });
  const auto bwd = column([](const CriterionRow& x) { return x.backward_log; });
  const bool has_approach = r.rows.front().approach_log.has_value();
  const auto app = column([](const CriterionRow& x) {
    return x.approach_log.value_or(-std::numeric_limits<double>::infinity());
  });
  const CriterionRow& last = r.rows.back();
  std::string failed;
  if (!detail::settled(fwd, log_tol)) failed = has_approach ? "decay trace" : "forward trace";
  else if (!detail::settled(bwd, log_tol)) failed = has_approach ? "approximant norm trace" : "backward trace";
  else if (has_approach && !detail::settled(app, log_tol)) failed = "approach error trace";
  if (failed.empty()) {
    r.verdict = Verdict::satisfied_to_horizon;
    return;
  }
  r.verdict = Verdict::violated;
  r.witness = CriterionWitness{last.k, last.n_k, failed + " not settled below log(tol) at the horizon", ""};
}

}  // namespace subhc
