#pragma once

#include <limits>
#include <ostream>

namespace proxkit {

/// Value in ]-inf, +inf]. Never -infinity; finite values are finite doubles.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit from finite reals

  static constexpr ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  constexpr bool is_finite() const { return value_ < std::numeric_limits<double>::infinity(); }
  constexpr bool is_infinite() const { return !is_finite(); }
  /// +inf is returned as the IEEE infinity.
  constexpr double value() const { return value_; }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    return ExtendedReal(a.value_ + b.value_);
  }
  friend constexpr ExtendedReal operator*(double w, ExtendedReal a) {
    return a.is_finite() ? ExtendedReal(w * a.value_) : a;
  }
  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) = default;

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal a) {
    if (a.is_infinite()) return os << "+inf";
    return os << a.value_;
  }

 private:
  double value_ = 0.0;
};

}  // namespace proxkit
