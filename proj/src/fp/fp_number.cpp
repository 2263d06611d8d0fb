#include "stabilis/fp_number.hpp"

#include "stabilis/exact_real.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <utility>

namespace stabilis {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw Error("floating-point exponent overflow");
  }
  return r;
}

std::int64_t bit_length(const Integer& z) {
  return z == 0 ? 0 : static_cast<std::int64_t>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

Integer shifted_left(const Integer& z, std::int64_t k) {
  Integer r;
  mpz_mul_2exp(r.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return r;
}

Integer power_of_two(std::int64_t k) { return shifted_left(Integer(1), k); }

Rational scaled_by_power_of_two(Rational q, std::int64_t k) {
  if (k >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
  }
  return q;
}

// The exact value of a nonzero float as sign * sig * 2^scale.
struct Dyadic {
  int sign;
  Integer sig;
  std::int64_t scale;
};

Dyadic as_dyadic(const FpNumber& a) {
  return {a.sign(), a.mantissa(), checked_add(a.exponent(), -a.precision())};
}

}  // namespace

// Builds normalized floats; the only code allowed to touch FpNumber's fields.
class Rounder {
 public:
  static FpNumber make(int sign, Integer mantissa, std::int64_t exponent, int bits) {
    FpNumber r;
    r.zero_ = false;
    r.sign_ = sign;
    r.mantissa_ = std::move(mantissa);
    r.exponent_ = exponent;
    r.bits_ = bits;
    return r;
  }

  /// Round sign * (n / d) * 2^scale to `t` bits, n, d > 0.
  static FpNumber round_scaled(int sign, const Integer& n, const Integer& d,
                               std::int64_t scale, int t) {
    const std::int64_t bn = bit_length(n);
    const std::int64_t bd = bit_length(d);
    // n/d lies in (2^(bn-bd-1), 2^(bn-bd+1)).
    std::int64_t e = checked_add(bn - bd, scale);
    const std::int64_t gap = bn - bd;
    const bool at_least_pow = gap >= 0 ? n >= shifted_left(d, gap) : shifted_left(n, -gap) >= d;
    if (at_least_pow) e = checked_add(e, 1);
    // 2^(e-1) <= |value| < 2^e; mantissa = round(n/d * 2^(scale + t - e)).
    const std::int64_t sh = checked_add(scale, t - e);
    const Integer num = sh > 0 ? shifted_left(n, sh) : n;
    const Integer den = sh < 0 ? shifted_left(d, -sh) : d;
    Integer q;
    Integer r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const int cmp_half = cmp(2 * r, den);
    if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(q.get_mpz_t()))) {
      q += 1;
    }
    if (bit_length(q) > t) {
      // Rounded up to 2^t.
      q = power_of_two(t - 1);
      e = checked_add(e, 1);
    }
    return make(sign, std::move(q), e, t);
  }

  static FpNumber round_dyadic(int sign, const Integer& sig, std::int64_t scale, int t) {
    if (sig == 0) return FpNumber();
    return round_scaled(sign, sig, Integer(1), scale, t);
  }
};

Precision::Precision(int bits) : bits_(bits) {
  if (bits <= 2) throw InvalidArgument("precision t must be greater than 2");
}

Rational Precision::unit_roundoff() const { return scaled_by_power_of_two(Rational(1), -bits_); }

double Precision::unit_roundoff_double() const { return std::ldexp(1.0, -bits_); }

FpNumber FpNumber::from_parts(int sign, Integer mantissa, std::int64_t exponent, Precision p) {
  if (mantissa == 0) return FpNumber();
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  if (bit_length(mantissa) != p.bits() || mantissa < 0) {
    throw InvalidArgument("mantissa not normalized for precision " + std::to_string(p.bits()));
  }
  return Rounder::make(sign, std::move(mantissa), exponent, p.bits());
}

FpNumber FpNumber::from_int(long v, Precision p) {
  FpNumber r = round(Rational(v), p);
  if (r.to_rational() != v) throw InvalidArgument("integer not representable at this precision");
  return r;
}

FpNumber FpNumber::from_double(double v, Precision p) {
  if (!std::isfinite(v)) throw InvalidArgument("non-finite double");
  const Rational exact(v);
  FpNumber r = round(exact, p);
  if (r.to_rational() != exact) throw InvalidArgument("double not representable at this precision");
  return r;
}

Rational FpNumber::to_rational() const {
  if (zero_) return Rational(0);
  Rational q(mantissa_);
  if (sign_ < 0) q = -q;
  return scaled_by_power_of_two(std::move(q), checked_add(exponent_, -bits_));
}

Real FpNumber::to_real() const {
  if (zero_) return Real(0);
  Real r;
  mpfr_set_z_2exp(r.backend().data(), mantissa_.get_mpz_t(),
                  static_cast<mpfr_exp_t>(exponent_ - bits_), MPFR_RNDN);
  return sign_ < 0 ? Real(-r) : r;
}

double FpNumber::to_double() const { return to_real().convert_to<double>(); }

FpNumber FpNumber::operator-() const {
  FpNumber r = *this;
  if (!zero_) r.sign_ = -sign_;
  return r;
}

FpNumber FpNumber::abs() const {
  FpNumber r = *this;
  r.sign_ = 1;
  return r;
}

FpNumber FpNumber::ldexp(std::int64_t k) const {
  FpNumber r = *this;
  if (!zero_) r.exponent_ = checked_add(exponent_, k);
  return r;
}

bool FpNumber::identical(const FpNumber& other) const {
  if (zero_ || other.zero_) return zero_ == other.zero_;
  return sign_ == other.sign_ && bits_ == other.bits_ && exponent_ == other.exponent_ &&
         mantissa_ == other.mantissa_;
}

std::string FpNumber::to_exact_string() const {
  if (zero_) return "0";
  std::ostringstream os;
  if (sign_ < 0) os << '-';
  os << mantissa_.get_str() << "*2^" << (exponent_ - bits_);
  return os.str();
}

bool operator==(const FpNumber& a, const FpNumber& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const FpNumber& a, const FpNumber& b) {
  if (a.sign() != b.sign()) return a.sign() <=> b.sign();
  if (a.is_zero()) return std::strong_ordering::equal;
  // Same nonzero sign: compare magnitudes, then flip for negatives.
  std::strong_ordering mag = std::strong_ordering::equal;
  if (a.exponent() != b.exponent()) {
    mag = a.exponent() <=> b.exponent();
  } else {
    const int diff = a.precision() - b.precision();
    const Integer ma = diff < 0 ? shifted_left(a.mantissa(), -diff) : a.mantissa();
    const Integer mb = diff > 0 ? shifted_left(b.mantissa(), diff) : b.mantissa();
    const int c = cmp(ma, mb);
    mag = c < 0 ? std::strong_ordering::less
                : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  if (a.sign() > 0) return mag;
  return 0 <=> mag;
}

FpNumber round(const Rational& x, Precision p) {
  const int s = sgn(x);
  if (s == 0) return FpNumber();
  const Integer n = abs(x.get_num());
  const Integer& d = x.get_den();
  return Rounder::round_scaled(s, n, d, 0, p.bits());
}

FpNumber round(const ExactReal& x, Precision p) {
  if (x.is_exact()) return round(x.center(), p);
  const Rational lo = x.lower();
  const Rational hi = x.upper();
  if (sgn(lo) <= 0 && sgn(hi) >= 0) {
    throw EnclosureTooWide("enclosure contains zero");
  }
  FpNumber a = round(lo, p);
  FpNumber b = round(hi, p);
  if (!a.identical(b)) throw EnclosureTooWide("enclosure straddles a rounding boundary");
  return a;
}

namespace {

FpNumber add_signed(const FpNumber& a, const FpNumber& b, int b_sign, Precision p) {
  if (b.is_zero()) return round(a.to_rational(), p);
  if (a.is_zero()) return b_sign > 0 ? round(b.to_rational(), p) : round(-b.to_rational(), p);

  Dyadic x = as_dyadic(a);
  Dyadic y = as_dyadic(b);
  y.sign *= b_sign;
  const std::int64_t top_x = checked_add(x.scale, bit_length(x.sig));
  const std::int64_t top_y = checked_add(y.scale, bit_length(y.sig));
  if (top_y > top_x) std::swap(x, y);
  const std::int64_t top = std::max(top_x, top_y);

  // A far smaller operand only decides which side of the large one the sum
  // falls on; replace it by a sticky unit well below every rounding boundary.
  // The unit must also sit below the large operand's lowest bit.
  const std::int64_t sticky_pos =
      std::min(checked_add(top, -static_cast<std::int64_t>(p.bits()) - 5), x.scale);
  const std::int64_t top_small = checked_add(y.scale, bit_length(y.sig));
  if (top_small < sticky_pos) {
    y.sig = 1;
    y.scale = sticky_pos - 1;
  }

  const std::int64_t base = std::min(x.scale, y.scale);
  Integer sx = shifted_left(x.sig, x.scale - base);
  Integer sy = shifted_left(y.sig, y.scale - base);
  Integer total = (x.sign > 0 ? sx : Integer(-sx)) + (y.sign > 0 ? sy : Integer(-sy));
  const int s = sgn(total);
  if (s == 0) return FpNumber();
  return Rounder::round_dyadic(s, abs(total), base, p.bits());
}

}  // namespace

FpNumber fp_add(const FpNumber& a, const FpNumber& b, Precision p) { return add_signed(a, b, +1, p); }

FpNumber fp_sub(const FpNumber& a, const FpNumber& b, Precision p) { return add_signed(a, b, -1, p); }

FpNumber fp_mul(const FpNumber& a, const FpNumber& b, Precision p) {
  if (a.is_zero() || b.is_zero()) return FpNumber();
  const Dyadic x = as_dyadic(a);
  const Dyadic y = as_dyadic(b);
  return Rounder::round_dyadic(x.sign * y.sign, x.sig * y.sig, checked_add(x.scale, y.scale),
                               p.bits());
}

FpNumber fp_div(const FpNumber& a, const FpNumber& b, Precision p) {
  if (b.is_zero()) throw DivisionByZero();
  if (a.is_zero()) return FpNumber();
  const Dyadic x = as_dyadic(a);
  const Dyadic y = as_dyadic(b);
  return Rounder::round_scaled(x.sign * y.sign, x.sig, y.sig, checked_add(x.scale, -y.scale),
                               p.bits());
}

Integer nearest_integer(const FpNumber& a) {
  if (a.is_zero()) return Integer(0);
  const std::int64_t scale = checked_add(a.exponent(), -a.precision());
  Integer mag;
  if (scale >= 0) {
    mag = shifted_left(a.mantissa(), scale);
  } else {
    const Integer den = power_of_two(-scale);
    Integer r;
    mpz_tdiv_qr(mag.get_mpz_t(), r.get_mpz_t(), a.mantissa().get_mpz_t(), den.get_mpz_t());
    const int c = cmp(2 * r, den);
    if (c > 0 || (c == 0 && mpz_odd_p(mag.get_mpz_t()))) mag += 1;
  }
  return a.sign() < 0 ? Integer(-mag) : mag;
}

ExactReal to_exact(const FpNumber& a) { return ExactReal(a.to_rational()); }

}  // namespace stabilis
