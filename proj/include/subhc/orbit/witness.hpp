#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subhc/core/format.hpp"
#include "subhc/orbit/orbit.hpp"

namespace subhc {

/// z with z ≈ u and Tⁿz ≈ v.
template <class V>
struct TransitivityWitness {
  V z;
  double err_near = 0.0;  ///< ‖z - u‖
  double err_far = 0.0;   ///< ‖Tⁿz - v‖
  bool invariant_ok = false;
  bool z_in_m = false;
};

/// λ when e is λB (or B) on ℓ²(ℕ₀).
inline std::optional<Coeff> rolewicz_lambda(const OperatorExpr& e) {
  if (auto* b = std::get_if<BackwardNode>(&e.node().v)) {
    if (b->kind == SpaceKind::unilateral) return Coeff(1.0);
  }
  if (auto* s = std::get_if<ScalarNode>(&e.node().v)) {
    if (auto* b = std::get_if<BackwardNode>(&s->of.node().v); b && b->kind == SpaceKind::unilateral) return s->c;
  }
  return std::nullopt;
}

namespace detail {
// z - u for the standard construction: T^{-n} v for invertible T,
// λ^{-n} Fⁿ v for λB.
inline SparseVector witness_offset(const OperatorExpr& t, const SparseVector& v, Index n) {
  if (auto lambda = rolewicz_lambda(t)) {
    if (*lambda == Coeff{}) throw NotInvertible("0·B has no insertion witness");
    return int_power(*lambda, -n) * apply_power(OperatorExpr::forward(SpaceKind::unilateral), v, n);
  }
  if (!is_invertible(t)) throw UnsupportedShape("witness construction needs an invertible operator or λB");
  return apply_power(t, v, -n);
}

inline DirectSumVector witness_offset(const OperatorExpr& t, const DirectSumVector& v, Index n) {
  return {witness_offset(left_part(t), v.left, n), witness_offset(right_part(t), v.right, n)};
}
}  // namespace detail

/// z = u + T^{-n}v (invertible T) or z = u + λ^{-n}Fⁿv (T = λB). Errors are
/// measured, not assumed.
template <class V>
TransitivityWitness<V> transitivity_witness(const OperatorExpr& t, const SubspaceOf_t<V>& m, const V& u, const V& v,
                                            Index n) {
  if (n < 0) throw std::invalid_argument("witness step must be >= 0");
  TransitivityWitness<V> w;
  const V offset = detail::witness_offset(t, v, n);
  w.z = u + offset;
  w.err_near = norm(offset);
  w.err_far = norm(apply_power(t, w.z, n) - v);
  w.invariant_ok = invariant_power(t, m, n);
  w.z_in_m = m.contains(w.z);
  return w;
}

inline TransitivityWitness<SparseVector> transitivity_witness(const WeightedShiftOperator& t,
                                                              const CoordinateSubspace& m, const SparseVector& u,
                                                              const SparseVector& v, Index n) {
  return transitivity_witness<SparseVector>(OperatorExpr::shift(t), m, u, v, n);
}

// ---------------------------------------------------------------------------
// Return sets

enum class ReturnClass { empty, finite, infinite_to_horizon, cofinite_beyond };

inline std::string_view to_string(ReturnClass c) {
  switch (c) {
    case ReturnClass::empty:
      return "empty";
    case ReturnClass::finite:
      return "finite";
    case ReturnClass::infinite_to_horizon:
      return "infinite_to_horizon";
    default:
      return "cofinite_beyond";
  }
}

/// Finite-horizon stand-ins for "cofinite" and "infinite".
struct ReturnCalibration {
  /// cofinite_beyond(N₀) needs [N₀, horizon] ⊆ set with a run of at least
  /// this fraction of the horizon.
  double cofinite_tail_fraction = 0.5;
  /// infinite_to_horizon needs |set| >= this fraction of the horizon.
  double infinite_fraction = 0.1;
};

struct ReturnSet {
  Index horizon = 0;
  std::vector<Index> members;
  ReturnClass classification = ReturnClass::empty;
  std::optional<Index> n0;
  ReturnCalibration calibration;
};

inline void classify(ReturnSet& r) {
  r.n0.reset();
  if (r.members.empty()) {
    r.classification = ReturnClass::empty;
    return;
  }
  // Longest tail run ending at the horizon.
  Index start = r.horizon + 1;
  for (auto it = r.members.rbegin(); it != r.members.rend() && *it == start - 1; ++it) start = *it;
  const double tail = static_cast<double>(r.horizon - start + 1);
  if (start <= r.horizon && tail >= r.calibration.cofinite_tail_fraction * static_cast<double>(r.horizon)) {
    r.classification = ReturnClass::cofinite_beyond;
    r.n0 = start;
  } else if (static_cast<double>(r.members.size()) >= r.calibration.infinite_fraction * static_cast<double>(r.horizon)) {
    r.classification = ReturnClass::infinite_to_horizon;
  } else {
    r.classification = ReturnClass::finite;
  }
}

namespace detail {
// One step of the witness offset map: T^{-1} for invertible T, λ^{-1}F for λB.
inline OperatorExpr offset_step(const OperatorExpr& t) {
  if (auto lambda = rolewicz_lambda(t)) {
    if (*lambda == Coeff{}) throw NotInvertible("0·B has no insertion witness");
    return OperatorExpr::scalar(Coeff(1.0) / *lambda, OperatorExpr::forward(SpaceKind::unilateral));
  }
  if (!is_invertible(t)) throw UnsupportedShape("witness construction needs an invertible operator or λB");
  return inverse(t);
}

template <class V>
ScaledVector<V> scaled_step(const OperatorExpr& e, ScaledVector<V> x, Index steps) {
  for (Index k = 0; k < steps; ++k) {
    x.mantissa = apply(e, x.mantissa);
    x.renormalize();
  }
  return x;
}

// ‖part‖·2^exp2 < r without forming the product.
inline bool scaled_below(double part_norm, std::int64_t exp2, double r) {
  if (part_norm == 0.0) return true;
  return std::log(part_norm) + static_cast<double>(exp2) * std::log(2.0) < std::log(r);
}

// Per n in [1, horizon]: the offset lies in M, ‖offset‖ < r_U and
// ‖Tⁿz - v‖ < r_V. Offsets and orbit points are carried as mantissa·2^e so long
// horizons neither underflow nor overflow; Tⁿz - v is evaluated as
// Tⁿu + (Tⁿ offset - v) with the round trip measured.
inline std::vector<bool> return_mask(const OperatorExpr& t, const CoordinateSubspace& m, const SparseVector& u,
                                     double u_radius, const SparseVector& v, double v_radius, Index horizon) {
  std::vector<bool> ok(static_cast<std::size_t>(std::max<Index>(horizon, 0)) + 1, false);
  const OperatorExpr step = offset_step(t);
  ScaledVector<SparseVector> offset{v, 0};
  ScaledVector<SparseVector> tu{u, 0};
  offset.renormalize();
  for (Index n = 1; n <= horizon; ++n) {
    offset = scaled_step(step, offset, 1);
    tu = scaled_step(t, tu, 1);
    // z - u = offset lies in M exactly when z does, since u ∈ M.
    if (!m.contains(offset.mantissa)) continue;
    if (!scaled_below(norm(offset.mantissa), offset.exp2, u_radius)) continue;
    if (tu.exp2 > 1000) continue;
    const ScaledVector<SparseVector> round = scaled_step(t, offset, n);
    if (round.exp2 > 1000) continue;
    ok[static_cast<std::size_t>(n)] = norm(tu.materialize() + (round.materialize() - v)) < v_radius;
  }
  return ok;
}
}  // namespace detail

/// n in [1, horizon] such that the standard witness z = u + offset_n lies in
/// M, ‖z - u‖ < r_U, ‖Tⁿz - v‖ < r_V and TⁿM ⊆ M. For direct sums the balls
/// are products of component balls and each component keeps its own scale.
/// `tol` is the sampling tolerance when invariance cannot be decided exactly.
template <class V>
ReturnSet return_set(const OperatorExpr& t, const SubspaceOf_t<V>& m, const V& u_center, double u_radius,
                     const V& v_center, double v_radius, Index horizon, double tol = 0.0,
                     ReturnCalibration calibration = {}) {
  if (!(u_radius > 0.0) || !(v_radius > 0.0)) throw std::invalid_argument("radii must be positive");
  if (!m.contains(u_center) || !m.contains(v_center)) throw PreconditionError("ball centers must lie in M");
  ReturnSet r;
  r.horizon = horizon;
  r.calibration = calibration;
  std::vector<bool> ok;
  if constexpr (std::is_same_v<V, SparseVector>) {
    ok = detail::return_mask(t, m, u_center, u_radius, v_center, v_radius, horizon);
  } else {
    ok = detail::return_mask(left_part(t), m.left, u_center.left, u_radius, v_center.left, v_radius, horizon);
    const auto right =
        detail::return_mask(right_part(t), m.right, u_center.right, u_radius, v_center.right, v_radius, horizon);
    for (std::size_t i = 0; i < ok.size(); ++i) ok[i] = ok[i] && right[i];
  }
  for (Index n = 1; n <= horizon; ++n) {
    if (ok[static_cast<std::size_t>(n)] && invariant_power(t, m, n, 32, tol)) r.members.push_back(n);
  }
  classify(r);
  return r;
}

// ---------------------------------------------------------------------------
// Commutant transport

struct CommutantImage {
  CoordinateSubspace image;
  OrbitTrace<SparseVector> orbit;
  std::vector<SparseVector> targets;
  DensityReport density;
  double commutation_residual = 0.0;
  /// max over retained steps n of ‖S(Tⁿx) - Tⁿ(Sx)‖.
  double transport_residual = 0.0;
};

/// Orbit of Sx under T (equal to S applied to the orbit of x when TS = ST),
/// the image subspace SM and density against S(targets).
inline CommutantImage map_orbit_by_commutant(const OperatorExpr& s, const OrbitTrace<SparseVector>& orbit,
                                             const std::vector<SparseVector>& targets, double eps,
                                             Index window = 16, double tol = 1e-12) {
  const OperatorExpr& t = orbit.op();
  const CommuteResult c = commute_check(t, s, window, tol);
  if (!c.commute) {
    throw PreconditionError("commutation residual " + detail::fmt_double(c.max_residual) + " exceeds tol");
  }
  const auto tr = translation(s);
  if (!tr || tr->annihilates) throw UnsupportedShape("image subspace is computed for translation-type S only");
  CoordinateSubspace image = orbit.subspace().translated(tr->shift);
  OrbitTrace<SparseVector> mapped = compute_orbit(t, apply(s, orbit.start()), orbit.length(), image, orbit.options());
  std::vector<SparseVector> mt;
  for (const auto& x : targets) mt.push_back(apply(s, x));
  DensityReport d = density_report(mapped, mt, eps, "S(targets)");
  double residual = 0.0;
  for (const auto& [n, sv] : orbit.retained()) {
    const SparseVector a = apply(s, sv.materialize());
    const SparseVector b = mapped.vector_at(n).materialize();
    residual = std::max(residual, norm(a - b));
  }
  return CommutantImage{std::move(image), std::move(mapped), std::move(mt), std::move(d), c.max_residual, residual};
}

}  // namespace subhc
