#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "subhc/core/subspace.hpp"
#include "subhc/criteria/iterates.hpp"
#include "subhc/criteria/report.hpp"
#include "subhc/shift/operator.hpp"

namespace subhc {

// ---------------------------------------------------------------------------
// Dense sets

/// Finitely supported members of `subspace`: support 1, then 2, ... up to
/// max_support, coefficients from `grid`, norm <= radius_cap; duplicates of
/// earlier supports are skipped.
struct NetDenseSet {
  CoordinateSubspace subspace;
  std::size_t max_support = 1;
  std::vector<double> grid;
  double radius_cap = 1.0;
};

struct ExplicitDenseSet {
  CoordinateSubspace subspace;
  std::vector<SparseVector> samples;
};

using DenseSetSpec = std::variant<NetDenseSet, ExplicitDenseSet>;

/// D_left ⊕ D_right, sampled as all pairs (left-major).
struct ProductDenseSet {
  DenseSetSpec left;
  DenseSetSpec right;
};

struct ExplicitPairDenseSet {
  DirectSumSubspace subspace;
  std::vector<DirectSumVector> samples;
};

using PairDenseSetSpec = std::variant<ProductDenseSet, ExplicitPairDenseSet>;

inline std::vector<SparseVector> samples(const DenseSetSpec& d, std::size_t budget) {
  return std::visit(
      [budget](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        std::vector<SparseVector> out;
        if constexpr (std::is_same_v<S, NetDenseSet>) {
          for (std::size_t sup = 1; sup <= s.max_support && out.size() < budget; ++sup) {
            for (auto& v : make_net(s.subspace, sup, s.grid, s.radius_cap)) {
              if (out.size() >= budget) break;
              if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
            }
          }
        } else {
          for (std::size_t i = 0; i < s.samples.size() && i < budget; ++i) out.push_back(s.samples[i]);
        }
        return out;
      },
      d);
}

/// A sample plus its position in each factor (right_index unused for single
/// spaces).
template <class V>
struct Sample {
  V value;
  std::size_t left_index = 0;
  std::size_t right_index = 0;
};

inline std::vector<Sample<SparseVector>> indexed_samples(const DenseSetSpec& d, std::size_t budget) {
  std::vector<Sample<SparseVector>> out;
  auto s = samples(d, budget);
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back({std::move(s[i]), i, 0});
  return out;
}

/// For product sets the budget applies per factor, so up to budget² pairs.
inline std::vector<Sample<DirectSumVector>> indexed_samples(const PairDenseSetSpec& d, std::size_t budget) {
  std::vector<Sample<DirectSumVector>> out;
  if (auto* p = std::get_if<ProductDenseSet>(&d)) {
    const auto l = samples(p->left, budget);
    const auto r = samples(p->right, budget);
    for (std::size_t i = 0; i < l.size(); ++i) {
      for (std::size_t j = 0; j < r.size(); ++j) out.push_back({DirectSumVector{l[i], r[j]}, i, j});
    }
  } else {
    const auto& e = std::get<ExplicitPairDenseSet>(d);
    for (std::size_t i = 0; i < e.samples.size() && i < budget; ++i) out.push_back({e.samples[i], i, i});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Approximants x_k for a target y

/// x_k = T^{-n_k} y.
struct InversePowerApprox {};
/// x_k = 0.
struct ZeroApprox {};
/// x_k = table[k-1][sample index].
template <class V>
struct TabulatedApprox {
  std::vector<std::vector<V>> table;
};
template <class V>
struct CustomApprox {
  std::function<V(Index k, Index n_k, const V& y)> f;
};

using ApproxRule = std::variant<InversePowerApprox, ZeroApprox, TabulatedApprox<SparseVector>, CustomApprox<SparseVector>>;

/// (x_k, y_k) built from a rule per component.
struct ComponentwiseApprox {
  ApproxRule left;
  ApproxRule right;
};

using PairApproxRule = std::variant<InversePowerApprox, ZeroApprox, TabulatedApprox<DirectSumVector>,
                                    CustomApprox<DirectSumVector>, ComponentwiseApprox>;

template <class V>
struct CriterionTraits;

template <>
struct CriterionTraits<SparseVector> {
  using Subspace = CoordinateSubspace;
  using DenseSet = DenseSetSpec;
  using Approx = ApproxRule;
};

template <>
struct CriterionTraits<DirectSumVector> {
  using Subspace = DirectSumSubspace;
  using DenseSet = PairDenseSetSpec;
  using Approx = PairApproxRule;
};

/// Iterates, the decay set D₁, the target set D₂ and the approximant rule.
template <class V>
struct CriterionData {
  IterateRule iterates;
  typename CriterionTraits<V>::DenseSet dense_1;
  typename CriterionTraits<V>::DenseSet dense_2;
  typename CriterionTraits<V>::Approx approximants;
};

namespace detail {
inline SparseVector approximant(const ApproxRule& rule, const OperatorExpr& t, Index k, Index n,
                                const Sample<SparseVector>& y, std::size_t which) {
  return std::visit(
      [&](const auto& r) -> SparseVector {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, InversePowerApprox>) {
          return apply_power(t, y.value, -n);
        } else if constexpr (std::is_same_v<R, ZeroApprox>) {
          return zero_like(y.value);
        } else if constexpr (std::is_same_v<R, TabulatedApprox<SparseVector>>) {
          const std::size_t idx = which == 0 ? y.left_index : y.right_index;
          if (static_cast<std::size_t>(k - 1) >= r.table.size() || idx >= r.table[k - 1].size()) {
            throw PreconditionError("tabulated approximant missing for k = " + std::to_string(k));
          }
          return r.table[k - 1][idx];
        } else {
          return r.f(k, n, y.value);
        }
      },
      rule);
}

inline DirectSumVector approximant(const PairApproxRule& rule, const OperatorExpr& t, Index k, Index n,
                                   const Sample<DirectSumVector>& y) {
  return std::visit(
      [&](const auto& r) -> DirectSumVector {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, InversePowerApprox>) {
          return apply_power(t, y.value, -n);
        } else if constexpr (std::is_same_v<R, ZeroApprox>) {
          return zero_like(y.value);
        } else if constexpr (std::is_same_v<R, TabulatedApprox<DirectSumVector>>) {
          if (static_cast<std::size_t>(k - 1) >= r.table.size() || y.left_index >= r.table[k - 1].size()) {
            throw PreconditionError("tabulated approximant missing for k = " + std::to_string(k));
          }
          return r.table[k - 1][y.left_index];
        } else if constexpr (std::is_same_v<R, CustomApprox<DirectSumVector>>) {
          return r.f(k, n, y.value);
        } else {
          const Sample<SparseVector> yl{y.value.left, y.left_index, 0};
          const Sample<SparseVector> yr{y.value.right, y.right_index, 0};
          return DirectSumVector{approximant(r.left, left_part(t), k, n, yl, 0),
                                 approximant(r.right, right_part(t), k, n, yr, 0)};
        }
      },
      rule);
}

inline std::string describe_vector(const SparseVector& v) {
  std::string s = "{";
  bool first = true;
  for (const auto& [i, c] : v.entries()) {
    if (!first) s += ", ";
    first = false;
    s += std::to_string(i) + ": " + fmt_double(c.real());
    if (c.imag() != 0.0) s += (c.imag() < 0 ? "-" : "+") + fmt_double(std::abs(c.imag())) + "i";
  }
  return s + "}";
}

inline std::string describe_vector(const DirectSumVector& p) {
  return "(" + describe_vector(p.left) + ", " + describe_vector(p.right) + ")";
}

template <class V>
V approximant_for(const typename CriterionTraits<V>::Approx& rule, const OperatorExpr& t, Index k, Index n,
                  const Sample<V>& y) {
  if constexpr (std::is_same_v<V, SparseVector>) {
    return approximant(rule, t, k, n, y, 0);
  } else {
    return approximant(rule, t, k, n, y);
  }
}

inline double safe_log_norm(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

template <class S>
bool subspace_nontrivial(const S& m) {
  return m.is_nontrivial();
}
}  // namespace detail

/// Checks the subspace-hypercyclic criterion to horizon K on the first
/// `sample_budget` samples of each dense set. Invariance T^{n_k}M ⊆ M is
/// decided exactly where possible and sampled otherwise.
template <class V>
CriterionReport check_subspace_criterion(const OperatorExpr& t, const typename CriterionTraits<V>::Subspace& m,
                                         const CriterionData<V>& data, double tol, Index horizon,
                                         std::size_t sample_budget) {
  if (!detail::subspace_nontrivial(m)) throw PreconditionError("criterion needs a nontrivial subspace");
  CriterionReport r;
  r.kind = std::is_same_v<V, SparseVector> ? "subspace" : "subspace_pair";
  r.tol = tol;
  r.horizon = horizon;
  const auto d1 = indexed_samples(data.dense_1, sample_budget);
  const auto d2 = indexed_samples(data.dense_2, sample_budget);
  for (const auto* set : {&d1, &d2}) {
    for (const auto& s : *set) {
      if (!m.contains(s.value)) throw PreconditionError("dense-set sample " + detail::describe_vector(s.value) + " is not in M");
    }
  }
  if (d1.empty() || d2.empty()) {
    r.verdict = Verdict::undecided;
    r.note = "no dense-set samples";
    return r;
  }
  const auto ns = first_iterates(data.iterates, horizon);
  const double ninf = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const Index k = static_cast<Index>(i) + 1;
    const Index n = ns[i];
    CriterionRow row;
    row.k = k;
    row.n_k = n;
    row.invariant = invariant_power(t, m, n);
    row.forward_log = ninf;
    for (const auto& x : d1) row.forward_log = std::max(row.forward_log, detail::safe_log_norm(norm(apply_power(t, x.value, n))));
    row.backward_log = ninf;
    row.approach_log = ninf;
    for (const auto& y : d2) {
      const V xk = detail::approximant_for<V>(data.approximants, t, k, n, y);
      if (!r.witness && !m.contains(xk)) {
        r.witness = CriterionWitness{k, n, "approximant outside M", detail::describe_vector(y.value)};
      }
      row.backward_log = std::max(row.backward_log, detail::safe_log_norm(norm(xk)));
      row.approach_log = std::max(*row.approach_log, detail::safe_log_norm(norm(apply_power(t, xk, n) - y.value)));
    }
    r.rows.push_back(row);
  }
  decide(r);
  return r;
}

// ---------------------------------------------------------------------------
// Moving criterion data across direct sums

/// Data for T ⊕ T on M ⊕ M: product dense sets and componentwise approximants,
/// same iterates.
inline CriterionData<DirectSumVector> lift_criterion(const CriterionData<SparseVector>& d) {
  return CriterionData<DirectSumVector>{d.iterates, ProductDenseSet{d.dense_1, d.dense_1},
                                        ProductDenseSet{d.dense_2, d.dense_2},
                                        ComponentwiseApprox{d.approximants, d.approximants}};
}

/// Component data of product-form pair data.
inline std::pair<CriterionData<SparseVector>, CriterionData<SparseVector>> split_criterion(
    const CriterionData<DirectSumVector>& d) {
  auto* p1 = std::get_if<ProductDenseSet>(&d.dense_1);
  auto* p2 = std::get_if<ProductDenseSet>(&d.dense_2);
  if (!p1 || !p2) throw UnsupportedShape("split_criterion needs product-form dense sets");
  ApproxRule left, right;
  if (auto* c = std::get_if<ComponentwiseApprox>(&d.approximants)) {
    left = c->left;
    right = c->right;
  } else if (std::holds_alternative<InversePowerApprox>(d.approximants)) {
    left = right = InversePowerApprox{};
  } else if (std::holds_alternative<ZeroApprox>(d.approximants)) {
    left = right = ZeroApprox{};
  } else {
    throw UnsupportedShape("split_criterion needs componentwise approximants");
  }
  return {CriterionData<SparseVector>{d.iterates, p1->left, p2->left, left},
          CriterionData<SparseVector>{d.iterates, p1->right, p2->right, right}};
}

}  // namespace subhc
