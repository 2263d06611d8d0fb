#include "stabilis/exact_real.hpp"

#include "stabilis/errors.hpp"

#include <utility>

namespace stabilis {

ExactReal::ExactReal(Rational exact) : center_(std::move(exact)), radius_(0) {}

ExactReal ExactReal::enclosure(Rational center, Rational radius) {
  if (sgn(radius) < 0) throw InvalidArgument("negative enclosure radius");
  ExactReal r;
  r.center_ = std::move(center);
  r.radius_ = std::move(radius);
  return r;
}

int ExactReal::sign() const {
  if (is_exact()) return sgn(center_);
  if (sgn(lower()) > 0) return 1;
  if (sgn(upper()) < 0) return -1;
  throw EnclosureTooWide("enclosure contains zero");
}

bool ExactReal::contains(const Rational& q) const { return lower() <= q && q <= upper(); }

std::string ExactReal::to_string() const {
  if (is_exact()) return center_.get_str();
  return center_.get_str() + " +/- " + radius_.get_str();
}

ExactReal ExactReal::operator-() const { return enclosure(-center_, radius_); }

ExactReal operator+(const ExactReal& a, const ExactReal& b) {
  return ExactReal::enclosure(a.center_ + b.center_, a.radius_ + b.radius_);
}

ExactReal operator-(const ExactReal& a, const ExactReal& b) {
  return ExactReal::enclosure(a.center_ - b.center_, a.radius_ + b.radius_);
}

ExactReal operator*(const ExactReal& a, const ExactReal& b) {
  Rational rad = abs(a.center_) * b.radius_ + abs(b.center_) * a.radius_ + a.radius_ * b.radius_;
  return ExactReal::enclosure(a.center_ * b.center_, std::move(rad));
}

ExactReal operator/(const ExactReal& a, const ExactReal& b) {
  if (b.is_exact()) {
    if (sgn(b.center_) == 0) throw DivisionByZero();
    return ExactReal::enclosure(a.center_ / b.center_, a.radius_ / abs(b.center_));
  }
  b.sign();  // throws when the divisor enclosure contains zero
  // |a/b - ca/cb| <= (|a - ca| + |ca/cb| |b - cb|) / min|b|.
  const Rational min_abs_b = abs(b.center_) - b.radius_;
  const Rational q = a.center_ / b.center_;
  return ExactReal::enclosure(q, (a.radius_ + abs(q) * b.radius_) / min_abs_b);
}

ExactReal ExactReal::truncated(long bits) const {
  Rational scaled = center_;
  mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  Integer floor_val;
  mpz_fdiv_q(floor_val.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  Rational c(floor_val);
  mpq_div_2exp(c.get_mpq_t(), c.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  if (c == center_) return *this;
  Rational ulp(1);
  mpq_div_2exp(ulp.get_mpq_t(), ulp.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  return enclosure(std::move(c), radius_ + ulp);
}

}  // namespace stabilis
