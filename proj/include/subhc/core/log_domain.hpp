#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace subhc {

// Products of many weights leave the double range long before the orbit gets
// interesting, so norms of powers are carried as logarithms.

/// Compensated (Neumaier) running sum of logarithms, i.e. a product kept in
/// log domain.
class LogProduct {
 public:
  LogProduct() = default;

  void multiply(double factor) { add_log(std::log(factor)); }

  /// Multiplies by factor^count.
  void multiply_power(double factor, std::int64_t count) { add_log(static_cast<double>(count) * std::log(factor)); }

  void add_log(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double log() const { return sum_ + comp_; }
  double value() const { return std::exp(log()); }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// log of a nonnegative linear value; log(0) = -inf.
inline double safe_log(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

/// Product kept as mantissa * 2^exponent. Multiplying by powers of two is
/// exact, so products of dyadic weights round-trip without error.
struct ScaledProduct {
  double mantissa = 1.0;
  std::int64_t exponent = 0;

  void normalize() {
    if (mantissa == 0.0 || !std::isfinite(mantissa)) return;
    int e = 0;
    mantissa = std::frexp(mantissa, &e);
    exponent += e;
  }

  ScaledProduct& operator*=(const ScaledProduct& o) {
    mantissa *= o.mantissa;
    exponent += o.exponent;
    normalize();
    return *this;
  }

  /// factor^count by repeated squaring.
  static ScaledProduct power(double factor, std::int64_t count) {
    ScaledProduct result;
    ScaledProduct base{factor, 0};
    base.normalize();
    while (count > 0) {
      if (count & 1) result *= base;
      base *= base;
      count >>= 1;
    }
    return result;
  }

  /// c * mantissa * 2^exponent, saturating to 0 / inf outside the double range.
  double scale(double c) const {
    const std::int64_t clamped = exponent > 4000 ? 4000 : (exponent < -4000 ? -4000 : exponent);
    return std::ldexp(c * mantissa, static_cast<int>(clamped));
  }

  double log() const { return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0); }
};

}  // namespace subhc
