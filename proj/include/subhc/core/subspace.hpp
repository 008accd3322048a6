#pragma once

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subhc/core/sparse_vector.hpp"

namespace subhc {

/// Indices i with (i mod modulus) in `residues`. Residues are normalized into
/// [0, modulus), sorted, unique.
struct ResidueClasses {
  Index modulus = 1;
  std::vector<Index> residues;
  friend bool operator==(const ResidueClasses&, const ResidueClasses&) = default;
};

/// Indices i >= start.
struct HalfLine {
  Index start = 0;
  friend bool operator==(const HalfLine&, const HalfLine&) = default;
};

/// A finite, sorted, duplicate-free index list.
struct ExplicitFinite {
  std::vector<Index> indices;
  friend bool operator==(const ExplicitFinite&, const ExplicitFinite&) = default;
};

using IndexSet = std::variant<ResidueClasses, HalfLine, ExplicitFinite>;

/// Closed span of {e_i : i in S}.
///
/// S = { i valid in the space : i >= floor (when set) and base(i) != complemented }.
/// Membership outside [-bound(), bound()] is periodic with period period(),
/// which is what makes emptiness, fullness and shift invariance decidable by a
/// finite scan.
class CoordinateSubspace {
 public:
  static CoordinateSubspace residues(SpaceKind kind, Index modulus, std::vector<Index> residues) {
    if (modulus < 1) throw std::invalid_argument("residue modulus must be >= 1");
    for (auto& r : residues) r = floor_mod(r, modulus);
    std::sort(residues.begin(), residues.end());
    residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
    return CoordinateSubspace(kind, ResidueClasses{modulus, std::move(residues)});
  }

  static CoordinateSubspace full(SpaceKind kind) { return residues(kind, 1, {0}); }

  static CoordinateSubspace half_line(SpaceKind kind, Index start) {
    return CoordinateSubspace(kind, HalfLine{start});
  }

  static CoordinateSubspace explicit_set(SpaceKind kind, std::vector<Index> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return CoordinateSubspace(kind, ExplicitFinite{std::move(indices)});
  }

  SpaceKind kind() const { return kind_; }
  const IndexSet& index_set() const { return set_; }
  bool complemented() const { return complemented_; }
  std::optional<Index> floor() const { return floor_; }

  bool contains(Index i) const {
    if (!valid_index(kind_, i)) return false;
    if (floor_ && i < *floor_) return false;
    return base_contains(i) != complemented_;
  }

  bool contains(const SparseVector& v) const {
    if (v.kind() != kind_) throw SpaceMismatch("vector and subspace live in different spaces");
    return std::all_of(v.entries().begin(), v.entries().end(), [&](const auto& e) { return contains(e.first); });
  }

  /// Orthogonal complement inside the same space.
  CoordinateSubspace complement() const {
    if (floor_) throw UnsupportedShape("complement of a floored coordinate subspace is not representable");
    CoordinateSubspace c = *this;
    c.complemented_ = !complemented_;
    return c;
  }

  /// Index set of the image under a pure translation by d; on the unilateral
  /// space indices pushed below 0 are annihilated.
  CoordinateSubspace translated(Index d) const {
    CoordinateSubspace t = *this;
    t.set_ = std::visit(
        [d](const auto& s) -> IndexSet {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, ResidueClasses>) {
            std::vector<Index> r;
            for (Index x : s.residues) r.push_back(floor_mod(x + d, s.modulus));
            std::sort(r.begin(), r.end());
            return ResidueClasses{s.modulus, r};
          } else if constexpr (std::is_same_v<S, HalfLine>) {
            return HalfLine{s.start + d};
          } else {
            std::vector<Index> r;
            for (Index x : s.indices) r.push_back(x + d);
            return ExplicitFinite{r};
          }
        },
        set_);
    if (kind_ == SpaceKind::unilateral) {
      Index f = (floor_ ? *floor_ : 0) + d;
      t.floor_ = f > 0 ? std::optional<Index>(f) : std::nullopt;
    } else if (floor_) {
      t.floor_ = *floor_ + d;
    }
    return t;
  }

  Index period() const {
    if (auto* r = std::get_if<ResidueClasses>(&set_)) return r->modulus;
    return 1;
  }

  /// Membership is periodic on (-inf, -bound()) and (bound(), inf).
  Index bound() const {
    Index b = 1;
    if (auto* h = std::get_if<HalfLine>(&set_)) b = std::max(b, std::abs(h->start) + 1);
    if (auto* e = std::get_if<ExplicitFinite>(&set_)) {
      for (Index i : e->indices) b = std::max(b, std::abs(i) + 1);
    }
    if (floor_) b = std::max(b, std::abs(*floor_) + 1);
    return b;
  }

  bool is_empty() const {
    const Index w = bound() + period();
    for (Index i = -w; i <= w; ++i) {
      if (contains(i)) return false;
    }
    return true;
  }

  bool is_full() const {
    const Index w = bound() + period();
    for (Index i = -w; i <= w; ++i) {
      if (valid_index(kind_, i) && !contains(i)) return false;
    }
    return true;
  }

  /// M != {0} and M != H.
  bool is_nontrivial() const { return !is_empty() && !is_full(); }

  bool is_finite() const {
    const Index b = bound();
    const Index p = period();
    for (Index i = b; i <= b + p; ++i) {
      if (contains(i) || contains(-i)) return false;
    }
    return true;
  }

  /// First `count` members in net order: ascending |i|, ties nonnegative first.
  /// Returns fewer when the subspace is finite.
  std::vector<Index> first_indices(std::size_t count) const {
    std::vector<Index> out;
    if (count == 0) return out;
    const bool finite = is_finite();
    const Index stop = bound() + period();
    for (Index a = 0;; ++a) {
      if (finite && a > stop) break;
      if (contains(a)) out.push_back(a);
      if (out.size() == count) break;
      if (a > 0 && contains(-a)) out.push_back(-a);
      if (out.size() == count) break;
    }
    return out;
  }

  std::string describe() const {
    std::string s = std::visit(
        [](const auto& x) -> std::string {
          using S = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<S, ResidueClasses>) {
            std::string r = "residues{";
            for (std::size_t i = 0; i < x.residues.size(); ++i) r += (i ? "," : "") + std::to_string(x.residues[i]);
            return r + "} mod " + std::to_string(x.modulus);
          } else if constexpr (std::is_same_v<S, HalfLine>) {
            return "half_line[" + std::to_string(x.start) + ",inf)";
          } else {
            std::string r = "explicit{";
            for (std::size_t i = 0; i < x.indices.size(); ++i) r += (i ? "," : "") + std::to_string(x.indices[i]);
            return r + "}";
          }
        },
        set_);
    if (complemented_) s = "complement(" + s + ")";
    if (floor_) s += " from " + std::to_string(*floor_);
    return std::string(to_string(kind_)) + ":" + s;
  }

  friend bool operator==(const CoordinateSubspace&, const CoordinateSubspace&) = default;

 private:
  CoordinateSubspace(SpaceKind kind, IndexSet set) : kind_(kind), set_(std::move(set)) {}

  bool base_contains(Index i) const {
    return std::visit(
        [i](const auto& s) -> bool {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, ResidueClasses>) {
            return std::binary_search(s.residues.begin(), s.residues.end(), floor_mod(i, s.modulus));
          } else if constexpr (std::is_same_v<S, HalfLine>) {
            return i >= s.start;
          } else {
            return std::binary_search(s.indices.begin(), s.indices.end(), i);
          }
        },
        set_);
  }

  SpaceKind kind_;
  IndexSet set_;
  bool complemented_ = false;
  std::optional<Index> floor_;
};

/// M₁ ⊕ M₂ = {(x, y) : x ∈ M₁, y ∈ M₂}.
struct DirectSumSubspace {
  CoordinateSubspace left;
  CoordinateSubspace right;

  bool contains(const DirectSumVector& p) const { return left.contains(p.left) && right.contains(p.right); }
  bool is_nontrivial() const {
    const bool all_empty = left.is_empty() && right.is_empty();
    const bool all_full = left.is_full() && right.is_full();
    return !all_empty && !all_full;
  }
  std::string describe() const { return "(" + left.describe() + ") + (" + right.describe() + ")"; }
  friend bool operator==(const DirectSumSubspace&, const DirectSumSubspace&) = default;
};

/// Restriction of v to the indices outside M.
inline SparseVector outside_part(const SparseVector& v, const CoordinateSubspace& m) {
  if (v.kind() != m.kind()) throw SpaceMismatch("distance_to_subspace: vector and subspace live in different spaces");
  std::vector<SparseVector::Entry> out;
  for (const auto& e : v.entries()) {
    if (!m.contains(e.first)) out.push_back(e);
  }
  return SparseVector::from_sorted(v.kind(), std::move(out));
}

/// Orthogonal distance from v to the coordinate subspace M.
inline double distance_to_subspace(const SparseVector& v, const CoordinateSubspace& m) {
  if (v.kind() != m.kind()) throw SpaceMismatch("distance_to_subspace: vector and subspace live in different spaces");
  double s = 0.0;
  for (const auto& e : v.entries()) {
    if (!m.contains(e.first)) s += std::norm(e.second);
  }
  return std::sqrt(s);
}

inline double distance_to_subspace(const DirectSumVector& p, const DirectSumSubspace& m) {
  const double l = distance_to_subspace(p.left, m.left);
  const double r = distance_to_subspace(p.right, m.right);
  return std::sqrt(l * l + r * r);
}

/// Every vector supported on the first `support_size` indices of M (net order)
/// with coefficients drawn from `grid` and norm <= radius_cap. The odometer
/// runs over grid positions with the last index varying fastest.
inline std::vector<SparseVector> make_net(const CoordinateSubspace& m, std::size_t support_size,
                                          const std::vector<double>& grid, double radius_cap) {
  if (support_size < 1) throw std::invalid_argument("make_net: support_size must be >= 1");
  if (grid.empty()) throw std::invalid_argument("make_net: empty coefficient grid");
  if (m.is_empty()) throw PreconditionError("make_net: subspace is empty");
  std::vector<double> values;
  for (double g : grid) {
    if (std::find(values.begin(), values.end(), g) == values.end()) values.push_back(g);
  }
  const std::vector<Index> idx = m.first_indices(support_size);
  const std::size_t s = idx.size();
  std::vector<std::size_t> pos(s, 0);
  std::vector<SparseVector> out;
  while (true) {
    std::vector<SparseVector::Entry> entries;
    for (std::size_t j = 0; j < s; ++j) entries.emplace_back(idx[j], values[pos[j]]);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVector v = SparseVector::from_sorted(m.kind(), std::move(entries));
    if (norm(v) <= radius_cap) out.push_back(std::move(v));
    std::size_t j = s;
    while (true) {
      if (j == 0) return out;
      --j;
      if (++pos[j] < values.size()) break;
      pos[j] = 0;
    }
  }
}

}  // namespace subhc
