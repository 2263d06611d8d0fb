#include "stabilis/elementary.hpp"

#include "stabilis/errors.hpp"

#include <algorithm>

namespace stabilis {

namespace {

Integer pow2(long k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(k));
  return r;
}

// q * 2^k for an integer q, as a rational.
Rational dyadic(const Integer& q, long k) {
  Rational r(q);
  if (k >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
  }
  return r;
}

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational scaled(const Rational& q, long k) {
  Rational r = q;
  if (k >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
  }
  return r;
}

// arctan(1/m) * 2^W in fixed point; `err` receives an error bound in units of
// 2^-W. Each truncated term is off by at most 3 units, the tail by at most 2.
Integer atan_inverse_fixed(long m, long w, long& err) {
  Integer power = pow2(w) / m;
  const Integer m2 = Integer(m) * m;
  Integer sum = 0;
  long j = 0;
  err = 2;
  while (power != 0) {
    const Integer term = power / (2 * j + 1);
    if (j % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
    err += 3;
    power /= m2;
    ++j;
  }
  return sum;
}

long bit_length(const Integer& z) {
  return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

}  // namespace

ExactReal pi_enclosure(long bits) {
  // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
  long w = bits + 16 + 2 * bit_length(Integer(bits + 1));
  for (;;) {
    long e5 = 0;
    long e239 = 0;
    const Integer a5 = atan_inverse_fixed(5, w, e5);
    const Integer a239 = atan_inverse_fixed(239, w, e239);
    const Integer center = 16 * a5 - 4 * a239;
    const Integer err = Integer(16 * e5 + 4 * e239);
    // err * 2^-w <= 2^-bits ?
    if (bit_length(err) <= w - bits) {
      return ExactReal::enclosure(dyadic(center, -w), dyadic(err, -w));
    }
    w += 16;
  }
}

ExactReal sin_enclosure(const ExactReal& x, long bits) {
  if (x.is_exact() && sgn(x.center()) == 0) return ExactReal(Rational(0));

  const long mag_bits = std::max(0L, bit_length(abs(floor_of(x.center()))));
  const long w = bits + 16;
  const ExactReal pi = pi_enclosure(w + mag_bits + 8);

  // Nearest multiple of pi; an off-by-one here only enlarges |r| slightly.
  const Rational ratio = x.center() / pi.center();
  const Integer n = floor_of(ratio + Rational(1, 2));
  const ExactReal r = x - ExactReal(Rational(n)) * pi;

  const Integer fixed_r = floor_of(scaled(r.center(), w) + Rational(1, 2));
  if (abs(fixed_r) > pow2(w + 1)) throw Error("sine argument reduction failed");
  const Rational input_err = r.radius() + dyadic(Integer(1), -w - 1);

  const Integer r2 = fixed_r * fixed_r;
  const Integer scale2w = pow2(2 * w);
  Integer term = fixed_r;
  Integer sum = fixed_r;
  long j = 1;
  for (;; ++j) {
    // |term_j| = |term_{j-1}| r^2 / ((2j)(2j+1)), truncated toward zero.
    Integer mag = abs(term) * r2;
    mag /= scale2w * ((2 * j) * (2 * j + 1));
    if (mag == 0) break;
    term = (j % 2 == 1) ? Integer(-mag) : mag;
    if (sgn(fixed_r) < 0) term = -term;
    sum += term;
  }
  // Per-term error <= 3 units, omitted tail <= 3 units, rounding of r <= 1.
  const Rational radius = dyadic(Integer(3 * j + 8), -w) + input_err;
  Rational center = dyadic(sum, -w);
  if (mpz_odd_p(n.get_mpz_t())) center = -center;
  return ExactReal::enclosure(std::move(center), radius);
}

ExactReal sqrt_enclosure(const ExactReal& x, long bits) {
  if (sgn(x.upper()) < 0) throw DomainError("square root of a negative number");
  if (x.is_exact() && sgn(x.center()) == 0) return ExactReal(Rational(0));
  Rational lo = x.lower();
  if (sgn(lo) < 0) lo = 0;
  const Rational& hi = x.upper();

  // Choose w so that sqrt(hi) * 2^w has about bits + 4 bits.
  const long hi_bits = bit_length(hi.get_num()) - bit_length(hi.get_den());
  const long w = bits + 4 - hi_bits / 2 + 1;

  Integer s_lo;
  mpz_sqrt(s_lo.get_mpz_t(), floor_of(scaled(lo, 2 * w)).get_mpz_t());
  const Integer hi_scaled = ceil_of(scaled(hi, 2 * w));
  Integer s_hi;
  mpz_sqrt(s_hi.get_mpz_t(), hi_scaled.get_mpz_t());
  if (s_hi * s_hi < hi_scaled) s_hi += 1;

  return ExactReal::enclosure(dyadic(s_lo + s_hi, -w - 1), dyadic(s_hi - s_lo, -w - 1));
}

FpNumber round_correctly(const std::function<ExactReal(long bits)>& evaluate, Precision p,
                         long initial_guard, long max_guard) {
  for (long guard = initial_guard; guard <= max_guard; guard *= 2) {
    try {
      return round(evaluate(p.bits() + guard), p);
    } catch (const EnclosureTooWide&) {
    }
  }
  throw EnclosureTooWide("could not decide rounding within the guard-bit budget");
}

}  // namespace stabilis
