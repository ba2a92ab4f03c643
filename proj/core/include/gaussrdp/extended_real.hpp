#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gaussrdp {

// A nonnegative extended real: a finite value >= 0 or +infinity.
// Rates and perception budgets live on [0, inf]. Construction rejects
// negatives and NaN, so downstream formulas can rely on IEEE semantics
// (exp(-inf) == 0, x + inf == inf) without per-call checks.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  // Implicit on purpose: rate arguments read naturally, e.g. xi(0.1, 0.0).
  ExtReal(double value) : value_(value) {
    if (std::isnan(value) || value < 0.0) {
      throw std::domain_error("ExtReal: value must be >= 0 and not NaN");
    }
  }

  static ExtReal infinity() {
    ExtReal r;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
  }

  // Accepts a decimal literal or "inf".
  static ExtReal parse(const std::string& text);

  double get() const { return value_; }
  bool is_finite() const { return std::isfinite(value_); }
  bool is_infinite() const { return std::isinf(value_); }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    ExtReal r;
    r.value_ = a.value_ + b.value_;
    return r;
  }
  friend bool operator==(ExtReal a, ExtReal b) { return a.value_ == b.value_; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.value_ < b.value_; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.value_ <= b.value_; }
  friend bool operator>(ExtReal a, ExtReal b) { return a.value_ > b.value_; }
  friend bool operator>=(ExtReal a, ExtReal b) { return a.value_ >= b.value_; }

 private:
  double value_ = 0.0;
};

// exp(-x), exact 0 at x = inf.
inline double exp_neg(ExtReal x) { return std::exp(-x.get()); }

// exp(-2x), exact 0 at x = inf.
inline double exp_neg_two(ExtReal x) { return std::exp(-2.0 * x.get()); }

// 1 - exp(-2x) via expm1 (accurate for small x, exact 1 at x = inf).
inline double one_minus_exp_neg_two(ExtReal x) {
  return -std::expm1(-2.0 * x.get());
}

// 1 - exp(-x), exact 1 at x = inf.
inline double one_minus_exp_neg(ExtReal x) { return -std::expm1(-x.get()); }

}  // namespace gaussrdp
