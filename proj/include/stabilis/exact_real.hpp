#pragma once

#include "stabilis/real.hpp"

#include <string>

namespace stabilis {

/// An exact rational, or a certified enclosure `center ± radius` of an
/// irrational value (pi, sines, square roots). Radius zero means exact.
class ExactReal {
 public:
  ExactReal() = default;
  ExactReal(Rational exact);  // NOLINT(google-explicit-constructor)
  ExactReal(long v) : ExactReal(Rational(v)) {}  // NOLINT

  static ExactReal enclosure(Rational center, Rational radius);

  bool is_exact() const { return radius_ == 0; }
  const Rational& center() const { return center_; }
  const Rational& radius() const { return radius_; }
  Rational lower() const { return center_ - radius_; }
  Rational upper() const { return center_ + radius_; }

  /// +1 / -1 if the enclosure excludes zero, 0 for an exact zero. Throws
  /// EnclosureTooWide for an inexact enclosure containing zero.
  int sign() const;
  bool contains(const Rational& q) const;

  Real to_real() const { return stabilis::to_real(center_); }
  double to_double() const { return center_.get_d(); }
  std::string to_string() const;

  ExactReal operator-() const;
  friend ExactReal operator+(const ExactReal& a, const ExactReal& b);
  friend ExactReal operator-(const ExactReal& a, const ExactReal& b);
  friend ExactReal operator*(const ExactReal& a, const ExactReal& b);
  /// Exact division needs an exact divisor or an enclosure that excludes zero.
  friend ExactReal operator/(const ExactReal& a, const ExactReal& b);

  /// Widen the radius so that the enclosure is representable with dyadic
  /// endpoints of `bits` fractional bits (keeps rationals from growing).
  ExactReal truncated(long bits) const;

 private:
  Rational center_ = 0;
  Rational radius_ = 0;
};

}  // namespace stabilis
