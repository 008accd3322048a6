#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "subhc/core/sparse_vector.hpp"

namespace subhc {

/// n_k = scale * k + offset for k >= 1.
struct LinearIterates {
  Index scale = 1;
  Index offset = 0;
  friend bool operator==(const LinearIterates&, const LinearIterates&) = default;
};

/// n_k = (base^{2(k-1)+parity+1} - 1) / (base - 1): the number of weights up to
/// the end of block 2(k-1)+parity of a block sequence with lengths base^j.
struct BlockEndIterates {
  Index base = 4;
  Index parity = 0;
  friend bool operator==(const BlockEndIterates&, const BlockEndIterates&) = default;
};

struct ListIterates {
  std::vector<Index> values;
  friend bool operator==(const ListIterates&, const ListIterates&) = default;
};

using IterateRule = std::variant<LinearIterates, BlockEndIterates, ListIterates>;

namespace detail {
inline Index block_end(Index base, Index block) {
  // Σ_{j=0}^{block} base^j, with overflow reported instead of wrapped.
  Index total = 0;
  Index len = 1;
  for (Index j = 0; j <= block; ++j) {
    if (total > std::numeric_limits<Index>::max() - len) throw std::overflow_error("block-end iterate overflows");
    total += len;
    if (j < block) {
      if (len > std::numeric_limits<Index>::max() / base) throw std::overflow_error("block-end iterate overflows");
      len *= base;
    }
  }
  return total;
}
}  // namespace detail

/// k-th iterate, k >= 1. Returns nullopt past the end of a finite list.
inline std::optional<Index> iterate_at(const IterateRule& rule, Index k) {
  if (k < 1) throw std::invalid_argument("iterate index starts at 1");
  return std::visit(
      [k](const auto& r) -> std::optional<Index> {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, LinearIterates>) {
          return r.scale * k + r.offset;
        } else if constexpr (std::is_same_v<R, BlockEndIterates>) {
          return detail::block_end(r.base, 2 * (k - 1) + r.parity);
        } else {
          if (k > static_cast<Index>(r.values.size())) return std::nullopt;
          return r.values[static_cast<std::size_t>(k - 1)];
        }
      },
      rule);
}

/// Checks that the rule produces a strictly increasing positive sequence.
inline void validate(const IterateRule& rule) {
  std::visit(
      [](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, LinearIterates>) {
          if (r.scale < 1 || r.scale + r.offset < 1) throw std::invalid_argument("linear iterates must be positive and increasing");
        } else if constexpr (std::is_same_v<R, BlockEndIterates>) {
          if (r.base < 2 || r.parity < 0) throw std::invalid_argument("block-end iterates need base >= 2, parity >= 0");
        } else {
          for (std::size_t i = 0; i < r.values.size(); ++i) {
            if (r.values[i] < 1 || (i > 0 && r.values[i] <= r.values[i - 1])) {
              throw std::invalid_argument("iterate list must be strictly increasing and positive");
            }
          }
        }
      },
      rule);
}

/// First `count` iterates (fewer for a short list).
inline std::vector<Index> first_iterates(const IterateRule& rule, Index count) {
  validate(rule);
  std::vector<Index> out;
  for (Index k = 1; k <= count; ++k) {
    auto n = iterate_at(rule, k);
    if (!n) break;
    out.push_back(*n);
  }
  return out;
}

/// All iterates <= horizon.
inline std::vector<Index> iterates_up_to(const IterateRule& rule, Index horizon) {
  validate(rule);
  std::vector<Index> out;
  for (Index k = 1;; ++k) {
    std::optional<Index> n;
    try {
      n = iterate_at(rule, k);
    } catch (const std::overflow_error&) {
      break;
    }
    if (!n || *n > horizon) break;
    out.push_back(*n);
  }
  return out;
}

inline std::string describe(const IterateRule& rule) {
  return std::visit(
      [](const auto& r) -> std::string {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, LinearIterates>) {
          return "linear(" + std::to_string(r.scale) + "k+" + std::to_string(r.offset) + ")";
        } else if constexpr (std::is_same_v<R, BlockEndIterates>) {
          return "block_ends(base=" + std::to_string(r.base) + ",parity=" + std::to_string(r.parity) + ")";
        } else {
          return "list(" + std::to_string(r.values.size()) + ")";
        }
      },
      rule);
}

}  // namespace subhc
