#pragma once

#include <compare>
#include <iosfwd>
#include <limits>
#include <string>

namespace hrcplan {

/// Cost on the extended non-negative reals: a finite value >= 0 or +infinity.
/// Never negative, never NaN. Infinity absorbs addition and compares as the maximum.
class ExtCost {
 public:
  constexpr ExtCost() = default;
  /// Throws hrcplan::Error for negative or NaN input.
  explicit ExtCost(double value);

  static constexpr ExtCost infinity() { return ExtCost(Raw{}, std::numeric_limits<double>::infinity()); }
  static constexpr ExtCost zero() { return ExtCost(); }

  constexpr bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
  constexpr bool is_finite() const { return !is_infinite(); }
  constexpr double value() const { return value_; }

  ExtCost& operator+=(ExtCost other) {
    value_ += other.value_;
    return *this;
  }
  friend ExtCost operator+(ExtCost a, ExtCost b) { return a += b; }

  /// Scaling by a non-negative finite factor. 0 * infinity is infinity: an infeasible
  /// action stays infeasible whatever coefficient multiplies it.
  friend ExtCost operator*(double factor, ExtCost c);

  friend constexpr bool operator==(ExtCost a, ExtCost b) { return a.value_ == b.value_; }
  friend constexpr std::partial_ordering operator<=>(ExtCost a, ExtCost b) { return a.value_ <=> b.value_; }

  /// `inf` for infinity, otherwise shortest round-trip decimal.
  std::string to_string() const;

 private:
  struct Raw {};
  constexpr ExtCost(Raw, double v) : value_(v) {}

  double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, ExtCost c);

}  // namespace hrcplan
