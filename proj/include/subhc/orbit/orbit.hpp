#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subhc/core/errors.hpp"
#include "subhc/core/log_domain.hpp"
#include "subhc/core/subspace.hpp"
#include "subhc/shift/operator.hpp"

namespace subhc {

template <class V>
struct SubspaceOf;
template <>
struct SubspaceOf<SparseVector> {
  using type = CoordinateSubspace;
};
template <>
struct SubspaceOf<DirectSumVector> {
  using type = DirectSumSubspace;
};
template <class V>
using SubspaceOf_t = typename SubspaceOf<V>::type;

inline double max_abs(const SparseVector& v) {
  double m = 0.0;
  for (const auto& e : v.entries()) m = std::max({m, std::abs(e.second.real()), std::abs(e.second.imag())});
  return m;
}
inline double max_abs(const DirectSumVector& p) { return std::max(max_abs(p.left), max_abs(p.right)); }

/// mantissa * 2^exp2. Orbit points are renormalized by powers of two, which is
/// exact, so long orbits neither overflow nor lose relative precision.
template <class V>
struct ScaledVector {
  V mantissa;
  std::int64_t exp2 = 0;

  void renormalize() {
    const double big = max_abs(mantissa);
    if (big == 0.0 || !std::isfinite(big)) return;
    int e = 0;
    std::frexp(big, &e);
    if (e > 256 || e < -256) {
      mantissa = Coeff(std::ldexp(1.0, -e)) * mantissa;
      exp2 += e;
    }
  }

  double log_norm() const { return safe_log(norm(mantissa)) + static_cast<double>(exp2) * std::log(2.0); }

  /// The vector itself; entries saturate when 2^exp2 leaves the double range.
  V materialize() const {
    if (exp2 == 0) return mantissa;
    const std::int64_t e = std::clamp<std::int64_t>(exp2, -1100, 1100);
    return Coeff(std::ldexp(1.0, static_cast<int>(e))) * mantissa;
  }

  friend bool operator==(const ScaledVector&, const ScaledVector&) = default;
};

/// ‖s - target‖. Orbit points beyond 2^1000 count as infinitely far; points
/// below 2^-1100 count as 0.
template <class V>
double distance_to(const ScaledVector<V>& s, const V& target) {
  if (s.exp2 > 1000) return std::numeric_limits<double>::infinity();
  if (s.exp2 < -1100) return norm(target);
  return norm(s.materialize() - target);
}

struct OrbitRecord {
  Index n = 0;
  Index support_min = 0;
  Index support_max = 0;
  std::size_t support_size = 0;
  double log_norm = 0.0;
  double log_distance = 0.0;  ///< log of the distance to the designated subspace
  friend bool operator==(const OrbitRecord&, const OrbitRecord&) = default;
};

struct OrbitOptions {
  /// Keep every step when L + 1 <= max_retained, else {0} ∪ {⌈1.2^j⌉} ∪ {L}.
  std::size_t max_retained = 4096;
  /// Abort when an orbit point has more nonzero coordinates than this.
  std::size_t support_cap = std::size_t{1} << 20;
};

namespace detail {
inline void support_of(const SparseVector& v, OrbitRecord& r) {
  r.support_size = v.size();
  r.support_min = v.min_index();
  r.support_max = v.max_index();
}

inline void support_of(const DirectSumVector& p, OrbitRecord& r) {
  r.support_size = p.left.size() + p.right.size();
  if (p.left.empty() && p.right.empty()) {
    r.support_min = r.support_max = 0;
  } else if (p.left.empty()) {
    r.support_min = p.right.min_index();
    r.support_max = p.right.max_index();
  } else if (p.right.empty()) {
    r.support_min = p.left.min_index();
    r.support_max = p.left.max_index();
  } else {
    r.support_min = std::min(p.left.min_index(), p.right.min_index());
    r.support_max = std::max(p.left.max_index(), p.right.max_index());
  }
}

inline std::vector<Index> checkpoint_steps(Index length, std::size_t max_retained) {
  std::vector<Index> out;
  if (static_cast<std::size_t>(length) + 1 <= max_retained) {
    for (Index n = 0; n <= length; ++n) out.push_back(n);
    return out;
  }
  out.push_back(0);
  for (double p = 1.0; p <= static_cast<double>(length); p *= 1.2) {
    const auto c = static_cast<Index>(std::ceil(p));
    if (c <= length && c != out.back()) out.push_back(c);
  }
  if (out.back() != length) out.push_back(length);
  return out;
}
template <class V>
void check_support_cap(const V& v, std::size_t cap, Index n) {
  std::size_t size = 0;
  if constexpr (std::is_same_v<V, SparseVector>) {
    size = v.size();
  } else {
    size = v.left.size() + v.right.size();
  }
  if (size > cap) {
    throw SupportOverflow("orbit support " + std::to_string(size) + " exceeds cap " + std::to_string(cap) +
                          " at step " + std::to_string(n));
  }
}
}  // namespace detail

/// Orb(op, start) up to step `length` with per-step scalar records and the
/// vectors at retained checkpoints. Any other step is recomputed on demand.
template <class V>
class OrbitTrace {
 public:
  using Subspace = SubspaceOf_t<V>;

  OrbitTrace(OperatorExpr op, V start, Index length, Subspace subspace, OrbitOptions options)
      : op_(std::move(op)), start_(std::move(start)), length_(length), subspace_(std::move(subspace)),
        options_(options) {
    if (length < 0) throw std::invalid_argument("orbit length must be >= 0");
    const auto keep = detail::checkpoint_steps(length, options.max_retained);
    std::size_t next_keep = 0;
    records_.reserve(static_cast<std::size_t>(length) + 1);
    replay([&](Index n, const ScaledVector<V>& s) {
      OrbitRecord r;
      r.n = n;
      detail::support_of(s.mantissa, r);
      r.log_norm = s.log_norm();
      r.log_distance = safe_log(distance_to_subspace(s.mantissa, subspace_)) + static_cast<double>(s.exp2) * std::log(2.0);
      records_.push_back(r);
      if (next_keep < keep.size() && keep[next_keep] == n) {
        retained_.emplace_back(n, s);
        ++next_keep;
      }
    });
  }

  const OperatorExpr& op() const { return op_; }
  const V& start() const { return start_; }
  Index length() const { return length_; }
  const Subspace& subspace() const { return subspace_; }
  const OrbitOptions& options() const { return options_; }
  const std::vector<OrbitRecord>& records() const { return records_; }
  const std::vector<std::pair<Index, ScaledVector<V>>>& retained() const { return retained_; }

  /// Calls f(n, opⁿ start) for n = 0..length, recomputing from the start.
  template <class F>
  void replay(F&& f) const {
    ScaledVector<V> s{start_, 0};
    s.renormalize();
    for (Index n = 0;; ++n) {
      detail::check_support_cap(s.mantissa, options_.support_cap, n);
      f(n, static_cast<const ScaledVector<V>&>(s));
      if (n == length_) break;
      s.mantissa = apply(op_, s.mantissa);
      s.renormalize();
    }
  }

  /// opⁿ start, stepping forward from the nearest retained checkpoint.
  ScaledVector<V> vector_at(Index n) const {
    if (n < 0 || n > length_) throw std::out_of_range("orbit step out of range");
    auto it = std::upper_bound(retained_.begin(), retained_.end(), n,
                               [](Index x, const auto& p) { return x < p.first; });
    ScaledVector<V> s = std::prev(it)->second;
    for (Index m = std::prev(it)->first; m < n; ++m) {
      s.mantissa = apply(op_, s.mantissa);
      s.renormalize();
    }
    return s;
  }

 private:
  OperatorExpr op_;
  V start_;
  Index length_;
  Subspace subspace_;
  OrbitOptions options_;
  std::vector<OrbitRecord> records_;
  std::vector<std::pair<Index, ScaledVector<V>>> retained_;
};

template <class V>
OrbitTrace<V> compute_orbit(const OperatorExpr& op, const V& x, Index length, const SubspaceOf_t<V>& m,
                            OrbitOptions options = {}) {
  return OrbitTrace<V>(op, x, length, m, options);
}

/// Component orbits of a direct-sum orbit: op₁ from x and op₂ from y.
inline std::pair<OrbitTrace<SparseVector>, OrbitTrace<SparseVector>> project_orbit(
    const OrbitTrace<DirectSumVector>& orbit) {
  if (arity(orbit.op()) == 1) throw SpaceMismatch("project_orbit needs a direct-sum operator");
  return {compute_orbit(left_part(orbit.op()), orbit.start().left, orbit.length(), orbit.subspace().left,
                        orbit.options()),
          compute_orbit(right_part(orbit.op()), orbit.start().right, orbit.length(), orbit.subspace().right,
                        orbit.options())};
}

// ---------------------------------------------------------------------------
// Density evidence

struct DensityEntry {
  std::size_t target = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  Index witness_step = -1;
  bool covered = false;
};

struct DensityReport {
  double eps = 0.0;
  std::string net;
  Index horizon = 0;
  std::vector<DensityEntry> entries;
  double coverage = 0.0;
};

/// Per target, the closest orbit point over all steps (first step on ties).
template <class V>
DensityReport density_report(const OrbitTrace<V>& orbit, const std::vector<V>& targets, double eps,
                             std::string net_description = {}) {
  if (targets.empty()) throw PreconditionError("density_report needs at least one target");
  DensityReport r;
  r.eps = eps;
  r.net = std::move(net_description);
  r.horizon = orbit.length();
  r.entries.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) r.entries[i].target = i;
  orbit.replay([&](Index n, const ScaledVector<V>& s) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double d = distance_to(s, targets[i]);
      if (d < r.entries[i].best_distance) {
        r.entries[i].best_distance = d;
        r.entries[i].witness_step = n;
      }
    }
  });
  std::size_t covered = 0;
  for (auto& e : r.entries) {
    e.covered = e.best_distance <= eps;
    covered += e.covered ? 1 : 0;
  }
  r.coverage = static_cast<double>(covered) / static_cast<double>(targets.size());
  return r;
}

}  // namespace subhc
