#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subhc/core/errors.hpp"
#include "subhc/core/sparse_vector.hpp"
#include "subhc/shift/weights.hpp"

namespace subhc {

/// T e_n = w_n e_{n+1} on ℓ²(ℤ) or ℓ²(ℕ₀).
class WeightedShiftOperator {
 public:
  WeightedShiftOperator(WeightSequence weights, SpaceKind kind) : weights_(std::move(weights)), kind_(kind) {}

  const WeightSequence& weights() const { return weights_; }
  SpaceKind kind() const { return kind_; }

  /// Bilateral with weights bounded below; the unilateral shift is never onto.
  bool invertible() const { return kind_ == SpaceKind::bilateral && weights_.inf() > 0.0; }

 private:
  WeightSequence weights_;
  SpaceKind kind_;
};

/// sup_n w_n.
inline double operator_norm_bound(const WeightedShiftOperator& t) { return t.weights().sup(); }

/// Index convention for backward weight products. `thm12` reads the product
/// as ∏_{j=1+m}^{n+m} 1/w_{-j}, `thm13` as ∏_{j=1-m}^{n-m} 1/w_{-j}. The two
/// agree at m = 0; `thm13` is the one equal to ‖T^{-n} e_m‖.
enum class BackwardConvention { thm12, thm13 };

enum class Direction { forward, backward };

inline std::string_view to_string(BackwardConvention c) { return c == BackwardConvention::thm12 ? "thm12" : "thm13"; }

/// Log of the weight product controlling ‖T^{±n} e_m‖:
///   forward:  Σ_{j=m}^{m+n-1} log w_j
///   backward: -Σ log w_{-j} over the index range chosen by `convention`.
inline double shift_power_norm(const WeightedShiftOperator& t, Index m, Index n, Direction dir,
                               BackwardConvention convention = BackwardConvention::thm12) {
  if (n < 0) throw std::invalid_argument("shift_power_norm: n must be nonnegative");
  if (dir == Direction::forward) return t.weights().log_sum(m, m + n);
  if (!t.invertible()) throw PreconditionError("shift_power_norm: backward products need an invertible shift");
  if (convention == BackwardConvention::thm12) return -t.weights().log_sum(-m - n, -m);
  return -t.weights().log_sum(m - n, m);
}

class OperatorExpr;
struct ExprNode;

/// Immutable expression tree over shifts, the backward shift, identity,
/// scalars, integer powers, composition and direct sums. Copies share nodes.
class OperatorExpr {
 public:
  static OperatorExpr shift(WeightedShiftOperator op);
  static OperatorExpr shift(WeightSequence w, SpaceKind kind) { return shift(WeightedShiftOperator(std::move(w), kind)); }
  /// Unweighted forward shift F.
  static OperatorExpr forward(SpaceKind kind) { return shift(WeightSequence::constant(1.0), kind); }
  /// B e_n = e_{n-1}; on the unilateral space B e_0 = 0.
  static OperatorExpr backward(SpaceKind kind);
  static OperatorExpr identity();
  static OperatorExpr scalar(Coeff c, OperatorExpr of);
  static OperatorExpr power(OperatorExpr of, Index n);
  /// outer ∘ inner.
  static OperatorExpr compose(OperatorExpr outer, OperatorExpr inner);
  static OperatorExpr direct_sum(OperatorExpr left, OperatorExpr right);
  /// λB on ℓ²(ℕ₀).
  static OperatorExpr rolewicz(Coeff lambda) { return scalar(lambda, backward(SpaceKind::unilateral)); }

  const ExprNode& node() const { return *node_; }

 private:
  explicit OperatorExpr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ShiftNode {
  WeightedShiftOperator op;
};
struct BackwardNode {
  SpaceKind kind;
};
struct IdentityNode {};
struct ScalarNode {
  Coeff c;
  OperatorExpr of;
};
struct PowerNode {
  OperatorExpr of;
  Index n;
};
struct ComposeNode {
  OperatorExpr outer;
  OperatorExpr inner;
};
struct DirectSumNode {
  OperatorExpr left;
  OperatorExpr right;
};

struct ExprNode {
  std::variant<ShiftNode, BackwardNode, IdentityNode, ScalarNode, PowerNode, ComposeNode, DirectSumNode> v;
};

inline OperatorExpr OperatorExpr::shift(WeightedShiftOperator op) {
  return OperatorExpr(std::make_shared<const ExprNode>(ExprNode{ShiftNode{std::move(op)}}));
}
inline OperatorExpr OperatorExpr::backward(SpaceKind kind) {
  return OperatorExpr(std::make_shared<const ExprNode>(ExprNode{BackwardNode{kind}}));
}
inline OperatorExpr OperatorExpr::identity() {
  return OperatorExpr(std::make_shared<const ExprNode>(ExprNode{IdentityNode{}}));
}
inline OperatorExpr OperatorExpr::scalar(Coeff c, OperatorExpr of) {
  return OperatorExpr(std::make_shared<const ExprNode>(ExprNode{ScalarNode{c, std::move(of)}}));
}
inline OperatorExpr OperatorExpr::power(OperatorExpr of, Index n) {
  return OperatorExpr(std::make_shared<const ExprNode>(ExprNode{PowerNode{std::move(of), n}}));
}
inline OperatorExpr OperatorExpr::compose(OperatorExpr outer, OperatorExpr inner) {
  return OperatorExpr(std::make_shared<const ExprNode>(ExprNode{ComposeNode{std::move(outer), std::move(inner)}}));
}
inline OperatorExpr OperatorExpr::direct_sum(OperatorExpr left, OperatorExpr right) {
  return OperatorExpr(std::make_shared<const ExprNode>(ExprNode{DirectSumNode{std::move(left), std::move(right)}}));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Structural queries

/// 0 = acts on anything (identity and scalars of it), 1 = single space,
/// 2 = direct sum of two spaces.
inline int arity(const OperatorExpr& e) {
  auto combine = [](int a, int b) {
    if (a == 0) return b;
    if (b == 0 || a == b) return a;
    throw SpaceMismatch("composition mixes a direct-sum operator with a single-space operator");
  };
  return std::visit(overloaded{
                        [](const ShiftNode&) { return 1; },
                        [](const BackwardNode&) { return 1; },
                        [](const IdentityNode&) { return 0; },
                        [](const ScalarNode& s) { return arity(s.of); },
                        [](const PowerNode& p) { return arity(p.of); },
                        [&](const ComposeNode& c) { return combine(arity(c.outer), arity(c.inner)); },
                        [](const DirectSumNode& d) {
                          if (arity(d.left) == 2 || arity(d.right) == 2) {
                            throw UnsupportedShape("nested direct sums are not supported");
                          }
                          return 2;
                        },
                    },
                    e.node().v);
}

/// Space the (single-space) expression acts on, if it pins one down.
inline std::optional<SpaceKind> space_kind(const OperatorExpr& e) {
  return std::visit(overloaded{
                        [](const ShiftNode& s) -> std::optional<SpaceKind> { return s.op.kind(); },
                        [](const BackwardNode& b) -> std::optional<SpaceKind> { return b.kind; },
                        [](const IdentityNode&) -> std::optional<SpaceKind> { return std::nullopt; },
                        [](const ScalarNode& s) { return space_kind(s.of); },
                        [](const PowerNode& p) { return space_kind(p.of); },
                        [](const ComposeNode& c) {
                          auto a = space_kind(c.outer);
                          auto b = space_kind(c.inner);
                          if (a && b && *a != *b) throw SpaceMismatch("composition mixes bilateral and unilateral operators");
                          return a ? a : b;
                        },
                        [](const DirectSumNode&) -> std::optional<SpaceKind> { return std::nullopt; },
                    },
                    e.node().v);
}

inline bool is_invertible(const OperatorExpr& e) {
  return std::visit(overloaded{
                        [](const ShiftNode& s) { return s.op.invertible(); },
                        [](const BackwardNode& b) { return b.kind == SpaceKind::bilateral; },
                        [](const IdentityNode&) { return true; },
                        [](const ScalarNode& s) { return s.c != Coeff{} && is_invertible(s.of); },
                        [](const PowerNode& p) { return p.n == 0 || is_invertible(p.of); },
                        [](const ComposeNode& c) { return is_invertible(c.outer) && is_invertible(c.inner); },
                        [](const DirectSumNode& d) { return is_invertible(d.left) && is_invertible(d.right); },
                    },
                    e.node().v);
}

inline OperatorExpr inverse(const OperatorExpr& e) {
  if (!is_invertible(e)) throw NotInvertible("operator is not invertible");
  return OperatorExpr::power(e, -1);
}

namespace detail {
inline OperatorExpr component(const OperatorExpr& e, bool left) {
  return std::visit(overloaded{
                        [&](const ShiftNode&) -> OperatorExpr {
                          throw SpaceMismatch("single-space operator has no direct-sum components");
                        },
                        [&](const BackwardNode&) -> OperatorExpr {
                          throw SpaceMismatch("single-space operator has no direct-sum components");
                        },
                        [&](const IdentityNode&) { return e; },
                        [&](const ScalarNode& s) { return OperatorExpr::scalar(s.c, component(s.of, left)); },
                        [&](const PowerNode& p) { return OperatorExpr::power(component(p.of, left), p.n); },
                        [&](const ComposeNode& c) {
                          return OperatorExpr::compose(component(c.outer, left), component(c.inner, left));
                        },
                        [&](const DirectSumNode& d) { return left ? d.left : d.right; },
                    },
                    e.node().v);
}

inline Coeff int_power(Coeff c, Index n) {
  if (n < 0) {
    c = Coeff(1.0) / c;
    n = -n;
  }
  Coeff r(1.0);
  while (n > 0) {
    if (n & 1) r *= c;
    c *= c;
    n >>= 1;
  }
  return r;
}

inline Coeff scale_coeff(Coeff c, const ScaledProduct& p) { return {p.scale(c.real()), p.scale(c.imag())}; }

inline void require_kind(SpaceKind op, SpaceKind v) {
  if (op != v) throw SpaceMismatch("operator and vector live in different spaces");
}
}  // namespace detail

/// Left component A of A ⊕ B, pushed through identity, scalars, powers and
/// compositions.
inline OperatorExpr left_part(const OperatorExpr& e) { return detail::component(e, true); }
inline OperatorExpr right_part(const OperatorExpr& e) { return detail::component(e, false); }

// ---------------------------------------------------------------------------
// Action on vectors

SparseVector apply_power(const OperatorExpr& e, const SparseVector& v, Index n);
DirectSumVector apply_power(const OperatorExpr& e, const DirectSumVector& v, Index n);

inline SparseVector apply(const OperatorExpr& e, const SparseVector& v) {
  return std::visit(
      overloaded{
          [&](const ShiftNode& s) {
            detail::require_kind(s.op.kind(), v.kind());
            std::vector<SparseVector::Entry> out;
            out.reserve(v.size());
            for (const auto& [i, c] : v.entries()) out.emplace_back(i + 1, c * s.op.weights()(i));
            return SparseVector::from_sorted(v.kind(), std::move(out));
          },
          [&](const BackwardNode& b) {
            detail::require_kind(b.kind, v.kind());
            std::vector<SparseVector::Entry> out;
            out.reserve(v.size());
            for (const auto& [i, c] : v.entries()) {
              if (valid_index(b.kind, i - 1)) out.emplace_back(i - 1, c);
            }
            return SparseVector::from_sorted(v.kind(), std::move(out));
          },
          [&](const IdentityNode&) { return v; },
          [&](const ScalarNode& s) { return s.c * apply(s.of, v); },
          [&](const PowerNode& p) { return apply_power(p.of, v, p.n); },
          [&](const ComposeNode& c) { return apply(c.outer, apply(c.inner, v)); },
          [&](const DirectSumNode&) -> SparseVector {
            throw SpaceMismatch("direct-sum operator applied to a single-space vector");
          },
      },
      e.node().v);
}

inline DirectSumVector apply(const OperatorExpr& e, const DirectSumVector& p) {
  return std::visit(overloaded{
                        [&](const ShiftNode&) -> DirectSumVector {
                          throw SpaceMismatch("single-space operator applied to a direct-sum vector");
                        },
                        [&](const BackwardNode&) -> DirectSumVector {
                          throw SpaceMismatch("single-space operator applied to a direct-sum vector");
                        },
                        [&](const IdentityNode&) { return p; },
                        [&](const ScalarNode& s) { return s.c * apply(s.of, p); },
                        [&](const PowerNode& pw) { return apply_power(pw.of, p, pw.n); },
                        [&](const ComposeNode& c) { return apply(c.outer, apply(c.inner, p)); },
                        [&](const DirectSumNode& d) {
                          return DirectSumVector{apply(d.left, p.left), apply(d.right, p.right)};
                        },
                    },
                    e.node().v);
}

/// e^n v for n in Z. Pure shifts use the per-index weight product
///   T^n e_m = (∏_{j=m}^{m+n-1} w_j) e_{m+n},  T^{-n} e_m = e_{m-n} / ∏_{j=m-n}^{m-1} w_j,
/// carried as mantissa * 2^exponent so dyadic weights stay exact.
inline SparseVector apply_power(const OperatorExpr& e, const SparseVector& v, Index n) {
  if (n == 0) return v;
  return std::visit(
      overloaded{
          [&](const ShiftNode& s) {
            detail::require_kind(s.op.kind(), v.kind());
            if (n < 0 && !s.op.invertible()) throw NotInvertible("negative power of a non-invertible weighted shift");
            std::vector<SparseVector::Entry> out;
            out.reserve(v.size());
            for (const auto& [i, c] : v.entries()) {
              if (n > 0) {
                out.emplace_back(i + n, detail::scale_coeff(c, s.op.weights().product(i, i + n)));
              } else {
                ScaledProduct p = s.op.weights().product(i + n, i);
                ScaledProduct inv{1.0 / p.mantissa, -p.exponent};
                inv.normalize();
                out.emplace_back(i + n, detail::scale_coeff(c, inv));
              }
            }
            return SparseVector::from_sorted(v.kind(), std::move(out));
          },
          [&](const BackwardNode& b) {
            detail::require_kind(b.kind, v.kind());
            if (n < 0 && b.kind == SpaceKind::unilateral) throw NotInvertible("the unilateral backward shift is not invertible");
            std::vector<SparseVector::Entry> out;
            out.reserve(v.size());
            for (const auto& [i, c] : v.entries()) {
              if (valid_index(b.kind, i - n)) out.emplace_back(i - n, c);
            }
            return SparseVector::from_sorted(v.kind(), std::move(out));
          },
          [&](const IdentityNode&) { return v; },
          [&](const ScalarNode& s) {
            if (n < 0 && s.c == Coeff{}) throw NotInvertible("negative power of the zero operator");
            return detail::int_power(s.c, n) * apply_power(s.of, v, n);
          },
          [&](const PowerNode& p) { return apply_power(p.of, v, p.n * n); },
          [&](const ComposeNode& c) {
            SparseVector w = v;
            if (n > 0) {
              for (Index k = 0; k < n; ++k) w = apply(c.outer, apply(c.inner, w));
            } else {
              for (Index k = 0; k < -n; ++k) w = apply_power(c.inner, apply_power(c.outer, w, -1), -1);
            }
            return w;
          },
          [&](const DirectSumNode&) -> SparseVector {
            throw SpaceMismatch("direct-sum operator applied to a single-space vector");
          },
      },
      e.node().v);
}

inline DirectSumVector apply_power(const OperatorExpr& e, const DirectSumVector& p, Index n) {
  if (n == 0) return p;
  if (arity(e) == 0) {
    return DirectSumVector{apply_power(e, p.left, n), apply_power(e, p.right, n)};
  }
  return DirectSumVector{apply_power(left_part(e), p.left, n), apply_power(right_part(e), p.right, n)};
}

// ---------------------------------------------------------------------------
// Invariance of coordinate subspaces

/// Net index displacement of an expression that acts as a (weighted,
/// scaled) translation. `truncating` marks unilateral actions that drop
/// indices pushed below 0.
struct Translation {
  Index shift = 0;
  bool annihilates = false;  ///< the zero operator
};

inline std::optional<Translation> translation(const OperatorExpr& e) {
  using R = std::optional<Translation>;
  return std::visit(overloaded{
                        [](const ShiftNode&) -> R { return Translation{1, false}; },
                        [](const BackwardNode&) -> R { return Translation{-1, false}; },
                        [](const IdentityNode&) -> R { return Translation{0, false}; },
                        [](const ScalarNode& s) -> R {
                          if (s.c == Coeff{}) return Translation{0, true};
                          return translation(s.of);
                        },
                        [](const PowerNode& p) -> R {
                          auto t = translation(p.of);
                          if (!t) return std::nullopt;
                          if (p.n == 0) return Translation{0, false};
                          if (t->annihilates) return p.n > 0 ? t : std::nullopt;
                          return Translation{t->shift * p.n, false};
                        },
                        [&](const ComposeNode& c) -> R {
                          auto a = translation(c.outer);
                          auto b = translation(c.inner);
                          if (!a || !b) return std::nullopt;
                          if (a->annihilates || b->annihilates) return Translation{0, true};
                          // On ℓ²(ℕ₀), forward-then-backward truncation is not a translation.
                          if (space_kind(e) == SpaceKind::unilateral && a->shift * b->shift < 0) return std::nullopt;
                          return Translation{a->shift + b->shift, false};
                        },
                        [](const DirectSumNode&) -> R { return std::nullopt; },
                    },
                    e.node().v);
}

/// Exact decision of (M + d) ⊆ M, where on ℓ²(ℕ₀) indices pushed below 0
/// vanish. Residue classes and half-lines are decided symbolically; other
/// shapes by scanning a window that covers one period of each tail.
inline bool translation_invariant(const CoordinateSubspace& m, Index d) {
  if (d == 0) return true;
  if (!m.complemented() && !m.floor()) {
    if (auto* r = std::get_if<ResidueClasses>(&m.index_set())) {
      for (Index x : r->residues) {
        if (!std::binary_search(r->residues.begin(), r->residues.end(), floor_mod(x + d, r->modulus))) return false;
      }
      return true;
    }
    if (auto* h = std::get_if<HalfLine>(&m.index_set())) {
      if (d > 0) return true;
      return m.kind() == SpaceKind::unilateral && h->start <= 0;
    }
  }
  const Index ad = d < 0 ? -d : d;
  const Index w = m.bound() + ad + m.period();
  for (Index i = -w; i <= w; ++i) {
    if (m.contains(i) && valid_index(m.kind(), i + d) && !m.contains(i + d)) return false;
  }
  return true;
}

enum class Decision { yes, no, undecided };

inline std::string_view to_string(Decision d) {
  return d == Decision::yes ? "true" : (d == Decision::no ? "false" : "undecided");
}

/// Decides e^n M ⊆ M exactly when e acts as a translation; otherwise
/// `undecided` (callers fall back to sampled_invariance).
inline Decision invariance_check(const OperatorExpr& e, const CoordinateSubspace& m, Index n) {
  if (arity(e) == 2) throw SpaceMismatch("direct-sum operator checked against a single coordinate subspace");
  if (auto k = space_kind(e); k && *k != m.kind()) throw SpaceMismatch("operator and subspace live in different spaces");
  auto t = translation(e);
  if (!t) return Decision::undecided;
  if (t->annihilates) return n > 0 ? Decision::yes : Decision::undecided;
  return translation_invariant(m, t->shift * n) ? Decision::yes : Decision::no;
}

inline Decision invariance_check(const OperatorExpr& e, const DirectSumSubspace& m, Index n) {
  const Decision l = invariance_check(left_part(e), m.left, n);
  const Decision r = invariance_check(right_part(e), m.right, n);
  if (l == Decision::no || r == Decision::no) return Decision::no;
  if (l == Decision::undecided || r == Decision::undecided) return Decision::undecided;
  return Decision::yes;
}

/// Evidence, not proof: e^n e_i stays within tol of M for members |i| <= window.
inline bool sampled_invariance(const OperatorExpr& e, const CoordinateSubspace& m, Index n, Index window,
                               double tol = 0.0) {
  for (Index i = -window; i <= window; ++i) {
    if (!m.contains(i)) continue;
    const SparseVector img = apply_power(e, SparseVector::basis(m.kind(), i), n);
    if (distance_to_subspace(img, m) > tol) return false;
  }
  return true;
}

inline bool sampled_invariance(const OperatorExpr& e, const DirectSumSubspace& m, Index n, Index window,
                               double tol = 0.0) {
  return sampled_invariance(left_part(e), m.left, n, window, tol) &&
         sampled_invariance(right_part(e), m.right, n, window, tol);
}

/// Exact decision when available, sampled evidence otherwise.
template <class Subspace>
bool invariant_power(const OperatorExpr& e, const Subspace& m, Index n, Index window = 32, double tol = 0.0) {
  const Decision d = invariance_check(e, m, n);
  if (d == Decision::undecided) return sampled_invariance(e, m, n, window, tol);
  return d == Decision::yes;
}

// ---------------------------------------------------------------------------
// Commutation and norm bounds

struct CommuteResult {
  bool commute = false;
  double max_residual = 0.0;
};

/// max over basis vectors e_i, |i| <= window, of ‖(ab - ba) e_i‖.
inline CommuteResult commute_check(const OperatorExpr& a, const OperatorExpr& b, Index window, double tol) {
  if (window < 1) throw std::invalid_argument("commute_check: window must be >= 1");
  const int ar = std::max(arity(a), arity(b));
  if (arity(a) != 0 && arity(b) != 0 && arity(a) != arity(b)) {
    throw SpaceMismatch("commute_check: operators act on different spaces");
  }
  double worst = 0.0;
  auto kind_of = [](const OperatorExpr& x, const OperatorExpr& y) {
    auto k = space_kind(x);
    if (!k) k = space_kind(y);
    return k.value_or(SpaceKind::bilateral);
  };
  const OperatorExpr ab = OperatorExpr::compose(a, b);
  const OperatorExpr ba = OperatorExpr::compose(b, a);
  if (ar <= 1) {
    const SpaceKind kind = kind_of(a, b);
    for (Index i = -window; i <= window; ++i) {
      if (!valid_index(kind, i)) continue;
      const SparseVector e = SparseVector::basis(kind, i);
      worst = std::max(worst, norm(apply(ab, e) - apply(ba, e)));
    }
  } else {
    const OperatorExpr al = left_part(a), bl = left_part(b), arr = right_part(a), br = right_part(b);
    const SpaceKind lk = kind_of(al, bl);
    const SpaceKind rk = kind_of(arr, br);
    for (Index i = -window; i <= window; ++i) {
      for (int side = 0; side < 2; ++side) {
        const SpaceKind kind = side == 0 ? lk : rk;
        if (!valid_index(kind, i)) continue;
        DirectSumVector p{SparseVector(lk), SparseVector(rk)};
        (side == 0 ? p.left : p.right) = SparseVector::basis(kind, i);
        worst = std::max(worst, norm(apply(ab, p) - apply(ba, p)));
      }
    }
  }
  return {worst <= tol, worst};
}

namespace detail {
// Upper bound on ‖e‖ (inverse = false) or ‖e^{-1}‖ (inverse = true).
inline double norm_bound(const OperatorExpr& e, bool inv) {
  return std::visit(
      overloaded{
          [&](const ShiftNode& s) {
            if (!inv) return s.op.weights().sup();
            if (!s.op.invertible()) throw NotInvertible("norm bound of the inverse of a non-invertible shift");
            return 1.0 / s.op.weights().inf();
          },
          [&](const BackwardNode& b) {
            if (inv && b.kind == SpaceKind::unilateral) throw NotInvertible("unilateral backward shift");
            return 1.0;
          },
          [&](const IdentityNode&) { return 1.0; },
          [&](const ScalarNode& s) {
            const double a = std::abs(s.c);
            return (inv ? 1.0 / a : a) * norm_bound(s.of, inv);
          },
          [&](const PowerNode& p) {
            if (p.n == 0) return 1.0;
            const bool flip = p.n < 0 ? !inv : inv;
            return std::pow(norm_bound(p.of, flip), static_cast<double>(p.n < 0 ? -p.n : p.n));
          },
          [&](const ComposeNode& c) { return norm_bound(c.outer, inv) * norm_bound(c.inner, inv); },
          [&](const DirectSumNode& d) { return std::max(norm_bound(d.left, inv), norm_bound(d.right, inv)); },
      },
      e.node().v);
}
}  // namespace detail

/// Upper bound on the operator norm: sup of weights for shifts, multiplicative
/// through compositions and powers, max over direct-sum components.
inline double norm_bound(const OperatorExpr& e) { return detail::norm_bound(e, false); }

}  // namespace subhc
