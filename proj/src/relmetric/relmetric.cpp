#include "stabilis/relmetric.hpp"

#include "stabilis/errors.hpp"
#include "stabilis/rng.hpp"

#include <cmath>

namespace stabilis {

namespace {

int sign_of(const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

SignPattern::SignPattern(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
  for (auto s : signs_) {
    if (s < -1 || s > 1) throw InvalidArgument("sign pattern entries must be -1, 0 or +1");
  }
}

std::vector<std::size_t> SignPattern::support() const {
  std::vector<std::size_t> chi;
  for (std::size_t i = 0; i < signs_.size(); ++i) {
    if (signs_[i] != 0) chi.push_back(i);
  }
  return chi;
}

std::string SignPattern::to_string() const {
  std::string s;
  for (auto v : signs_) s += v > 0 ? '+' : (v < 0 ? '-' : '0');
  return s;
}

RelPoint::RelPoint(std::vector<Real> coords) : coords_(std::move(coords)) {
  std::vector<std::int8_t> signs(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (boost::multiprecision::isnan(coords_[i]) || stabilis::is_infinite(coords_[i])) {
      throw InvalidArgument("RelPoint coordinates must be finite");
    }
    signs[i] = static_cast<std::int8_t>(sign_of(coords_[i]));
  }
  pattern_ = SignPattern(std::move(signs));
}

RelPoint::RelPoint(std::initializer_list<double> coords)
    : RelPoint(std::vector<Real>(coords.begin(), coords.end())) {}

RelPoint RelPoint::from_doubles(std::span<const double> coords) {
  return RelPoint(std::vector<Real>(coords.begin(), coords.end()));
}

RelPoint RelPoint::from_exact(std::span<const ExactReal> coords) {
  std::vector<Real> v;
  v.reserve(coords.size());
  for (const auto& c : coords) v.push_back(c.to_real());
  return RelPoint(std::move(v));
}

RelPoint RelPoint::from_fp(std::span<const FpNumber> coords) {
  std::vector<Real> v;
  v.reserve(coords.size());
  for (const auto& c : coords) v.push_back(c.to_real());
  return RelPoint(std::move(v));
}

bool RelPoint::is_zero() const {
  for (const auto& c : coords_) {
    if (c != 0) return false;
  }
  return true;
}

ExtDist::ExtDist(Real v) : value_(std::move(v)) {
  if (value_ < 0 || boost::multiprecision::isnan(value_)) {
    throw InvalidArgument("distance must be a nonnegative extended real");
  }
}

ExtDist ExtDist::infinite() { return ExtDist(real_infinity()); }

ExtDist rel_dist(const RelPoint& x, const RelPoint& y) {
  require_same_dim(x.dim(), y.dim());
  if (!(x.pattern() == y.pattern())) return ExtDist::infinite();
  Real sum = 0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (x[i] == 0) continue;
    const Real l = log(y[i] / x[i]);
    sum += l * l;
  }
  return ExtDist(sqrt(sum));
}

ExtDist rel_dist_exact(std::span<const ExactReal> x, std::span<const ExactReal> y) {
  require_same_dim(x.size(), y.size());
  Real sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int sx = x[i].sign();
    const int sy = y[i].sign();
    if (sx != sy) return ExtDist::infinite();
    if (sx == 0) continue;
    const Rational delta = y[i].center() / x[i].center() - 1;
    const Real l = log1p(to_real(delta));
    sum += l * l;
  }
  return ExtDist(sqrt(sum));
}

ExtDist rel_dist_exact(std::span<const FpNumber> computed, std::span<const ExactReal> reference) {
  std::vector<ExactReal> c;
  c.reserve(computed.size());
  for (const auto& v : computed) c.push_back(to_exact(v));
  return rel_dist_exact(reference, c);
}

RelPoint geodesic_point(const RelPoint& x, const RelPoint& y, const Real& s) {
  require_same_dim(x.dim(), y.dim());
  if (!(x.pattern() == y.pattern())) throw DomainError("points lie in different components");
  if (s < 0 || s > 1) throw InvalidArgument("geodesic parameter must lie in [0, 1]");
  std::vector<Real> z(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (x[i] == 0) continue;
    z[i] = x[i] * exp(s * log(y[i] / x[i]));
  }
  return RelPoint(std::move(z));
}

RelPoint rel_exp_map(const RelPoint& x, std::span<const Real> step) {
  require_same_dim(x.dim(), step.size());
  std::vector<Real> y(x.coords());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (x[i] != 0) y[i] = x[i] * exp(step[i]);
  }
  return RelPoint(std::move(y));
}

namespace {

// Unit direction on chi(x) (zero elsewhere); all-zero when chi(x) is empty.
std::vector<Real> random_direction(const RelPoint& x, Rng& rng) {
  std::vector<Real> v(x.dim());
  const auto chi = x.pattern().support();
  if (chi.empty()) return v;
  Real norm2 = 0;
  do {
    norm2 = 0;
    for (auto i : chi) {
      v[i] = Real(rng.normal());
      norm2 += v[i] * v[i];
    }
  } while (norm2 == 0);
  const Real norm = sqrt(norm2);
  for (auto i : chi) v[i] /= norm;
  return v;
}

}  // namespace

std::vector<RelPoint> rel_ball_sample(const RelPoint& x, const Real& r, std::size_t n,
                                      std::uint64_t seed) {
  if (r < 0 || is_infinite(r)) throw InvalidArgument("ball radius must be finite and >= 0");
  std::vector<RelPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, i);
    std::vector<Real> v = random_direction(x, rng);
    const Real rho = r * Real(rng.uniform());
    for (auto& c : v) c *= rho;
    out.push_back(rel_exp_map(x, v));
  }
  return out;
}

RelPoint rel_sphere_point(const RelPoint& x, const Real& r, std::uint64_t seed,
                          std::uint64_t index) {
  Rng rng = Rng::stream(seed, index);
  std::vector<Real> v = random_direction(x, rng);
  for (auto& c : v) c *= r;
  return rel_exp_map(x, v);
}

Real abs_dist(const RelPoint& a, const RelPoint& b) {
  require_same_dim(a.dim(), b.dim());
  Real sum = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Real d = a[i] - b[i];
    sum += d * d;
  }
  return sqrt(sum);
}

Real abs_dist_exact(std::span<const FpNumber> computed, std::span<const ExactReal> reference) {
  require_same_dim(computed.size(), reference.size());
  Rational sum = 0;
  for (std::size_t i = 0; i < computed.size(); ++i) {
    const Rational d = computed[i].to_rational() - reference[i].center();
    sum += d * d;
  }
  return sqrt(to_real(sum));
}

}  // namespace stabilis
