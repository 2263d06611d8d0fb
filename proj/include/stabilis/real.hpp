#pragma once

// Extended-precision binary floating point used for distances, condition
// numbers and everything that is not an exact rational.

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <limits>
#include <string>

namespace stabilis {

using Integer = mpz_class;
using Rational = mpq_class;

/// ~160-bit MPFR float with static precision (48 decimal digits).
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<48>, boost::multiprecision::et_off>;

inline constexpr int kRealBits = 160;

inline Real real_infinity() { return std::numeric_limits<Real>::infinity(); }

inline bool is_infinite(const Real& x) { return boost::multiprecision::isinf(x); }

inline Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

inline Real to_real(const Integer& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

/// Exact rational value of a finite Real.
inline Rational to_rational(const Real& x) {
  mpz_class m;
  const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.backend().data());
  Rational q(m);
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return q;
}

/// Shortest decimal that round-trips through an IEEE double.
std::string format_double(double v);

/// Exact value of a decimal literal: "3", "-7/2", "0.125", "1e-3", "2.5E+4".
/// Throws InvalidArgument on anything else.
Rational parse_rational(const std::string& text);

}  // namespace stabilis
