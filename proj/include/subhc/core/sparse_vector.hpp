#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subhc/core/errors.hpp"

namespace subhc {

using Index = std::int64_t;
using Coeff = std::complex<double>;

/// ℓ²(ℤ) is bilateral, ℓ²(ℕ₀) unilateral.
enum class SpaceKind { bilateral, unilateral };

inline std::string_view to_string(SpaceKind k) {
  return k == SpaceKind::bilateral ? "bilateral" : "unilateral";
}

inline bool valid_index(SpaceKind k, Index i) { return k == SpaceKind::bilateral || i >= 0; }

/// Mathematical modulus: result in [0, p).
inline Index floor_mod(Index a, Index p) {
  Index r = a % p;
  return r < 0 ? r + p : r;
}

/// Finitely supported vector over the standard basis {e_i}.
///
/// Entries are kept sorted by index and never hold an exact zero. Pruning is
/// exact: a coefficient of 1e-300 is stored, 0.0 is not.
class SparseVector {
 public:
  using Entry = std::pair<Index, Coeff>;

  explicit SparseVector(SpaceKind kind = SpaceKind::bilateral) : kind_(kind) {}

  SparseVector(SpaceKind kind, std::initializer_list<Entry> entries) : kind_(kind) {
    for (const auto& [i, c] : entries) add(i, c);
  }

  static SparseVector basis(SpaceKind kind, Index i, Coeff c = 1.0) {
    SparseVector v(kind);
    v.set(i, c);
    return v;
  }

  /// Builds from entries already sorted by strictly increasing index.
  static SparseVector from_sorted(SpaceKind kind, std::vector<Entry> entries) {
    SparseVector v(kind);
    Index prev = 0;
    bool first = true;
    for (const auto& [i, c] : entries) {
      if (!valid_index(kind, i)) throw std::out_of_range("negative index " + std::to_string(i) + " in unilateral vector");
      if (!first && i <= prev) throw std::invalid_argument("from_sorted: indices not strictly increasing");
      prev = i;
      first = false;
    }
    std::erase_if(entries, [](const Entry& e) { return e.second == Coeff{}; });
    v.entries_ = std::move(entries);
    return v;
  }

  SpaceKind kind() const { return kind_; }
  std::span<const Entry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  Index min_index() const { return entries_.empty() ? 0 : entries_.front().first; }
  Index max_index() const { return entries_.empty() ? 0 : entries_.back().first; }

  Coeff operator[](Index i) const {
    auto it = find(i);
    return (it != entries_.end() && it->first == i) ? it->second : Coeff{};
  }

  void set(Index i, Coeff c) {
    check_index(i);
    auto it = find(i);
    if (it != entries_.end() && it->first == i) {
      if (c == Coeff{}) entries_.erase(it);
      else it->second = c;
    } else if (c != Coeff{}) {
      entries_.insert(it, {i, c});
    }
  }

  void add(Index i, Coeff c) { set(i, (*this)[i] + c); }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e.second);
    return s;
  }

  SparseVector& operator*=(Coeff c) {
    if (c == Coeff{}) {
      entries_.clear();
      return *this;
    }
    for (auto& e : entries_) e.second *= c;
    std::erase_if(entries_, [](const Entry& e) { return e.second == Coeff{}; });
    return *this;
  }

  SparseVector& operator+=(const SparseVector& o) { return *this = combine(*this, o, 1.0); }
  SparseVector& operator-=(const SparseVector& o) { return *this = combine(*this, o, -1.0); }

  friend SparseVector operator+(const SparseVector& a, const SparseVector& b) { return combine(a, b, 1.0); }
  friend SparseVector operator-(const SparseVector& a, const SparseVector& b) { return combine(a, b, -1.0); }
  friend SparseVector operator*(Coeff c, SparseVector v) { return v *= c; }
  friend SparseVector operator*(SparseVector v, Coeff c) { return v *= c; }
  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.kind_ == b.kind_ && a.entries_ == b.entries_;
  }

 private:
  std::vector<Entry>::iterator find(Index i) {
    return std::lower_bound(entries_.begin(), entries_.end(), i,
                            [](const Entry& e, Index k) { return e.first < k; });
  }
  std::vector<Entry>::const_iterator find(Index i) const {
    return std::lower_bound(entries_.begin(), entries_.end(), i,
                            [](const Entry& e, Index k) { return e.first < k; });
  }

  void check_index(Index i) const {
    if (!valid_index(kind_, i)) throw std::out_of_range("negative index " + std::to_string(i) + " in unilateral vector");
  }

  // Merge of two sorted supports: a + sign * b.
  static SparseVector combine(const SparseVector& a, const SparseVector& b, double sign) {
    if (a.kind_ != b.kind_) throw SpaceMismatch("cannot combine bilateral and unilateral vectors");
    std::vector<Entry> out;
    out.reserve(a.entries_.size() + b.entries_.size());
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() || ib != b.entries_.end()) {
      if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->first < ib->first)) {
        out.push_back(*ia++);
      } else if (ia == a.entries_.end() || ib->first < ia->first) {
        out.emplace_back(ib->first, sign * ib->second);
        ++ib;
      } else {
        Coeff c = ia->second + sign * ib->second;
        if (c != Coeff{}) out.emplace_back(ia->first, c);
        ++ia;
        ++ib;
      }
    }
    SparseVector r(a.kind_);
    r.entries_ = std::move(out);
    return r;
  }

  SpaceKind kind_;
  std::vector<Entry> entries_;
};

inline double norm(const SparseVector& v) { return std::sqrt(v.norm_squared()); }

/// Pair (x, y) in H ⊕ H with ‖(x,y)‖² = ‖x‖² + ‖y‖².
struct DirectSumVector {
  SparseVector left;
  SparseVector right;

  DirectSumVector& operator+=(const DirectSumVector& o) {
    left += o.left;
    right += o.right;
    return *this;
  }
  friend DirectSumVector operator+(DirectSumVector a, const DirectSumVector& b) { return a += b; }
  friend DirectSumVector operator-(const DirectSumVector& a, const DirectSumVector& b) {
    return {a.left - b.left, a.right - b.right};
  }
  friend DirectSumVector operator*(Coeff c, const DirectSumVector& p) { return {c * p.left, c * p.right}; }
  friend bool operator==(const DirectSumVector&, const DirectSumVector&) = default;

  double norm_squared() const { return left.norm_squared() + right.norm_squared(); }
};

inline double direct_sum_norm(const DirectSumVector& p) { return std::sqrt(p.norm_squared()); }
inline double norm(const DirectSumVector& p) { return direct_sum_norm(p); }

/// Zero vector shaped like `like`.
inline SparseVector zero_like(const SparseVector& like) { return SparseVector(like.kind()); }
inline DirectSumVector zero_like(const DirectSumVector& like) {
  return {SparseVector(like.left.kind()), SparseVector(like.right.kind())};
}

}  // namespace subhc
