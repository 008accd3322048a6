#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "subhc/core/errors.hpp"
#include "subhc/core/log_domain.hpp"
#include "subhc/core/sparse_vector.hpp"

namespace subhc {

/// w_i = c for every i.
struct ConstantWeights {
  double c = 1.0;
};

/// w_i = pos for i >= 0, neg for i < 0.
struct PiecewiseWeights {
  double pos = 1.0;
  double neg = 1.0;
};

/// How a block sequence continues to negative indices.
enum class NegativeSide {
  reciprocal_mirror,  ///< w_{-j} = 1 / w_{j-1}: backward products equal forward ones
  mirror,             ///< w_{-j} = w_{j-1}
};

/// Consecutive blocks on i >= 0 of lengths base^k (k = 0, 1, ...); block k
/// carries values[(k + phase) mod values.size()].
struct BlockWeights {
  Index base = 4;
  std::vector<double> values;
  Index phase = 0;
  NegativeSide negative = NegativeSide::reciprocal_mirror;
};

/// w_i = window[i - start] inside the window, `fallback` elsewhere.
struct TableWeights {
  Index start = 0;
  std::vector<double> window;
  double fallback = 1.0;
};

using WeightGenerator = std::variant<ConstantWeights, PiecewiseWeights, BlockWeights, TableWeights>;

/// Positive, bounded weight sequence {w_i}_{i in Z} given by a closed-form
/// generator.
class WeightSequence {
 public:
  WeightSequence(WeightGenerator g) : gen_(std::move(g)) { validate(); }  // NOLINT(google-explicit-constructor)

  static WeightSequence constant(double c) { return WeightSequence(ConstantWeights{c}); }
  static WeightSequence piecewise(double pos, double neg) { return WeightSequence(PiecewiseWeights{pos, neg}); }
  static WeightSequence blocks(Index base, std::vector<double> values, Index phase,
                               NegativeSide negative = NegativeSide::reciprocal_mirror) {
    return WeightSequence(BlockWeights{base, std::move(values), phase, negative});
  }
  static WeightSequence table(Index start, std::vector<double> window, double fallback) {
    return WeightSequence(TableWeights{start, std::move(window), fallback});
  }

  const WeightGenerator& generator() const { return gen_; }

  double operator()(Index i) const {
    return std::visit(
        [i](const auto& g) -> double {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, ConstantWeights>) {
            return g.c;
          } else if constexpr (std::is_same_v<G, PiecewiseWeights>) {
            return i >= 0 ? g.pos : g.neg;
          } else if constexpr (std::is_same_v<G, BlockWeights>) {
            if (i >= 0) return block_value(g, block_of(g.base, i));
            const double w = block_value(g, block_of(g.base, -1 - i));
            return g.negative == NegativeSide::reciprocal_mirror ? 1.0 / w : w;
          } else {
            if (i >= g.start && i - g.start < static_cast<Index>(g.window.size())) {
              return g.window[static_cast<std::size_t>(i - g.start)];
            }
            return g.fallback;
          }
        },
        gen_);
  }

  double sup() const { return extreme(true); }
  double inf() const { return extreme(false); }

  /// Calls f(first, length, weight) for maximal runs of constant weight that
  /// tile [lo, hi), in increasing index order.
  template <class F>
  void for_each_run(Index lo, Index hi, F&& f) const {
    if (hi <= lo) return;
    std::visit(
        [&](const auto& g) {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, ConstantWeights>) {
            f(lo, hi - lo, g.c);
          } else if constexpr (std::is_same_v<G, PiecewiseWeights>) {
            if (lo < 0) f(lo, std::min<Index>(hi, 0) - lo, g.neg);
            if (hi > 0) f(std::max<Index>(lo, 0), hi - std::max<Index>(lo, 0), g.pos);
          } else if constexpr (std::is_same_v<G, BlockWeights>) {
            if (lo < 0) {
              // [lo, min(hi,0)) mirrors onto [-min(hi,0), -lo) on the positive side.
              const Index nlo = -std::min<Index>(hi, 0);
              const Index nhi = -lo;
              std::vector<std::tuple<Index, Index, double>> mirrored;
              positive_block_runs(g, nlo, nhi, [&](Index a, Index len, double w) {
                const double v = g.negative == NegativeSide::reciprocal_mirror ? 1.0 / w : w;
                mirrored.emplace_back(-1 - (a + len - 1), len, v);
              });
              for (auto it = mirrored.rbegin(); it != mirrored.rend(); ++it) {
                f(std::get<0>(*it), std::get<1>(*it), std::get<2>(*it));
              }
            }
            if (hi > 0) positive_block_runs(g, std::max<Index>(lo, 0), hi, f);
          } else {
            const Index wlo = g.start;
            const Index whi = g.start + static_cast<Index>(g.window.size());
            Index i = lo;
            if (i < std::min(hi, wlo)) {
              f(i, std::min(hi, wlo) - i, g.fallback);
              i = std::min(hi, wlo);
            }
            for (; i < std::min(hi, whi); ++i) f(i, Index{1}, g.window[static_cast<std::size_t>(i - wlo)]);
            i = std::max(i, whi);
            if (i < hi) f(i, hi - i, g.fallback);
          }
        },
        gen_);
  }

  /// Σ_{j in [lo, hi)} log w_j, accumulated run by run with compensation.
  double log_sum(Index lo, Index hi) const {
    LogProduct acc;
    for_each_run(lo, hi, [&](Index, Index len, double w) { acc.multiply_power(w, len); });
    return acc.log();
  }

  /// ∏_{j in [lo, hi)} w_j as mantissa * 2^exponent.
  ScaledProduct product(Index lo, Index hi) const {
    ScaledProduct p;
    for_each_run(lo, hi, [&](Index, Index len, double w) { p *= ScaledProduct::power(w, len); });
    return p;
  }

 private:
  static constexpr Index kMaxBlockLength = Index{1} << 60;

  static Index block_of(Index base, Index i) {
    // Block k covers [(base^k - 1)/(base - 1), (base^{k+1} - 1)/(base - 1)).
    Index start = 0;
    Index len = 1;
    Index k = 0;
    while (i >= start + len) {
      start += len;
      len = len > kMaxBlockLength / base ? kMaxBlockLength : len * base;
      ++k;
    }
    return k;
  }

  static double block_value(const BlockWeights& g, Index k) {
    const auto n = static_cast<Index>(g.values.size());
    return g.values[static_cast<std::size_t>(floor_mod(k + g.phase, n))];
  }

  template <class F>
  static void positive_block_runs(const BlockWeights& g, Index lo, Index hi, F&& f) {
    Index start = 0;
    Index len = 1;
    Index k = 0;
    while (start < hi) {
      const Index end = start + len;
      const Index a = std::max(lo, start);
      const Index b = std::min(hi, end);
      if (a < b) f(a, b - a, block_value(g, k));
      start = end;
      len = len > kMaxBlockLength / g.base ? kMaxBlockLength : len * g.base;
      ++k;
    }
  }

  double extreme(bool want_max) const {
    auto pick = [want_max](double a, double b) { return want_max ? std::max(a, b) : std::min(a, b); };
    return std::visit(
        [&](const auto& g) -> double {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, ConstantWeights>) {
            return g.c;
          } else if constexpr (std::is_same_v<G, PiecewiseWeights>) {
            return pick(g.pos, g.neg);
          } else if constexpr (std::is_same_v<G, BlockWeights>) {
            double r = g.values.front();
            for (double v : g.values) {
              r = pick(r, v);
              r = pick(r, g.negative == NegativeSide::reciprocal_mirror ? 1.0 / v : v);
            }
            return r;
          } else {
            double r = g.fallback;
            for (double v : g.window) r = pick(r, v);
            return r;
          }
        },
        gen_);
  }

  void validate() const {
    auto check = [](double w) {
      if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be positive and finite");
    };
    std::visit(
        [&](const auto& g) {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, ConstantWeights>) {
            check(g.c);
          } else if constexpr (std::is_same_v<G, PiecewiseWeights>) {
            check(g.pos);
            check(g.neg);
          } else if constexpr (std::is_same_v<G, BlockWeights>) {
            if (g.base < 2) throw std::invalid_argument("block length base must be >= 2");
            if (g.values.empty()) throw std::invalid_argument("block values must be nonempty");
            for (double v : g.values) check(v);
          } else {
            check(g.fallback);
            for (double v : g.window) check(v);
          }
        },
        gen_);
  }

  WeightGenerator gen_;
};

}  // namespace subhc
