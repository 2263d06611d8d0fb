#pragma once

// Idealized binary floating-point system F_u: precision t > 2, unit roundoff
// u = 2^-t, unbounded exponent, no subnormals, no infinities.

#include "stabilis/errors.hpp"
#include "stabilis/real.hpp"

#include <compare>
#include <cstdint>
#include <string>

namespace stabilis {

class ExactReal;

class Precision {
 public:
  explicit Precision(int bits);

  int bits() const { return bits_; }
  /// u = 2^-t, exactly.
  Rational unit_roundoff() const;
  double unit_roundoff_double() const;

  friend bool operator==(Precision, Precision) = default;
  friend auto operator<=>(Precision, Precision) = default;

 private:
  int bits_;
};

/// An element of F_u: sign * mantissa * 2^(exponent - t) with
/// 2^(t-1) <= mantissa <= 2^t - 1, or the canonical zero.
///
/// `t` is the precision the number was created under. A number created at
/// precision t is also an element of every F_u' with t' >= t.
class FpNumber {
 public:
  /// Canonical zero.
  FpNumber() = default;

  /// Validates normalization; throws InvalidArgument otherwise.
  static FpNumber from_parts(int sign, Integer mantissa, std::int64_t exponent,
                             Precision p);
  /// Exactly representable small integer (|v| < 2^t required).
  static FpNumber from_int(long v, Precision p);
  /// Exactly representable IEEE double; throws if it does not fit in t bits.
  static FpNumber from_double(double v, Precision p);

  bool is_zero() const { return zero_; }
  /// -1, 0 or +1.
  int sign() const { return zero_ ? 0 : sign_; }
  const Integer& mantissa() const { return mantissa_; }
  std::int64_t exponent() const { return exponent_; }
  int precision() const { return bits_; }

  Rational to_rational() const;
  Real to_real() const;
  double to_double() const;

  FpNumber operator-() const;
  FpNumber abs() const;
  /// Exact multiplication by 2^k.
  FpNumber ldexp(std::int64_t k) const;

  /// Same value, same creation precision and same representation.
  bool identical(const FpNumber& other) const;

  /// Exact `[-]M*2^E` form: value = sign * M * 2^E.
  std::string to_exact_string() const;

  /// Value comparison; numbers created under different precisions compare by
  /// the real numbers they denote.
  friend bool operator==(const FpNumber& a, const FpNumber& b);
  friend std::strong_ordering operator<=>(const FpNumber& a, const FpNumber& b);

 private:
  int sign_ = 1;
  Integer mantissa_ = 0;
  std::int64_t exponent_ = 0;
  int bits_ = 3;
  bool zero_ = true;

  friend class Rounder;
};

/// fl_u: nearest element of F_u, ties to even mantissa.
FpNumber round(const Rational& x, Precision p);
/// Rounds an enclosure; throws EnclosureTooWide when its endpoints round to
/// different floats (or it straddles zero).
FpNumber round(const ExactReal& x, Precision p);

FpNumber fp_add(const FpNumber& a, const FpNumber& b, Precision p);
FpNumber fp_sub(const FpNumber& a, const FpNumber& b, Precision p);
FpNumber fp_mul(const FpNumber& a, const FpNumber& b, Precision p);
/// Throws DivisionByZero when b == 0.
FpNumber fp_div(const FpNumber& a, const FpNumber& b, Precision p);

/// Round-half-even to the nearest integer, returned as an exact integer.
Integer nearest_integer(const FpNumber& a);

ExactReal to_exact(const FpNumber& a);

}  // namespace stabilis
