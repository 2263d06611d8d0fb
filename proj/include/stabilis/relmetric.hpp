#pragma once

// Coordinatewise relative error metric: R^d splits into 3^d sign-pattern
// components; inside one component the distance is the Euclidean norm of the
// coordinatewise log-ratios, across components it is infinite.

#include "stabilis/exact_real.hpp"
#include "stabilis/fp_number.hpp"
#include "stabilis/real.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stabilis {

/// Element of {-1, 0, +1}^d identifying a connected component.
class SignPattern {
 public:
  SignPattern() = default;
  explicit SignPattern(std::vector<std::int8_t> signs);

  std::size_t size() const { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<std::int8_t>& signs() const { return signs_; }
  /// chi(x): indices of the nonzero coordinates.
  std::vector<std::size_t> support() const;
  /// Compact form such as "+0-".
  std::string to_string() const;

  friend bool operator==(const SignPattern&, const SignPattern&) = default;

 private:
  std::vector<std::int8_t> signs_;
};

/// A point of R^d together with its sign pattern.
class RelPoint {
 public:
  RelPoint() = default;
  explicit RelPoint(std::vector<Real> coords);
  RelPoint(std::initializer_list<double> coords);
  static RelPoint from_doubles(std::span<const double> coords);
  static RelPoint from_exact(std::span<const ExactReal> coords);
  static RelPoint from_fp(std::span<const FpNumber> coords);

  std::size_t dim() const { return coords_.size(); }
  const std::vector<Real>& coords() const { return coords_; }
  const Real& operator[](std::size_t i) const { return coords_[i]; }
  const SignPattern& pattern() const { return pattern_; }
  bool is_zero() const;

  friend bool operator==(const RelPoint& a, const RelPoint& b) { return a.coords_ == b.coords_; }

 private:
  std::vector<Real> coords_;
  SignPattern pattern_;
};

/// Nonnegative extended real.
class ExtDist {
 public:
  ExtDist() = default;
  explicit ExtDist(Real v);
  static ExtDist infinite();

  bool is_infinite() const { return stabilis::is_infinite(value_); }
  const Real& value() const { return value_; }
  double to_double() const { return value_.convert_to<double>(); }

  friend ExtDist operator+(const ExtDist& a, const ExtDist& b) { return ExtDist(a.value_ + b.value_); }
  friend bool operator==(const ExtDist& a, const ExtDist& b) { return a.value_ == b.value_; }
  friend auto operator<=>(const ExtDist& a, const ExtDist& b) {
    return a.value_ < b.value_ ? std::partial_ordering::less
                               : (b.value_ < a.value_ ? std::partial_ordering::greater
                                                      : std::partial_ordering::equivalent);
  }

 private:
  Real value_ = 0;
};

/// Relative error distance; throws DimensionMismatch.
ExtDist rel_dist(const RelPoint& x, const RelPoint& y);

/// Relative distance between exactly known vectors, computed from exact
/// coordinate ratios (log1p of the exact y_i/x_i - 1), so that errors near u
/// keep full relative accuracy at any precision.
ExtDist rel_dist_exact(std::span<const ExactReal> x, std::span<const ExactReal> y);
ExtDist rel_dist_exact(std::span<const FpNumber> computed, std::span<const ExactReal> reference);

/// Point at parameter s in [0, 1] on the minimizing geodesic from x to y
/// (coordinatewise log-linear interpolation). Throws DomainError when
/// rel_dist(x, y) is infinite.
RelPoint geodesic_point(const RelPoint& x, const RelPoint& y, const Real& s);

/// n points of the closed relative ball B_r(x), same sign pattern as x.
/// Sample i draws from Rng::stream(seed, i): a standard normal direction on
/// chi(x) and a radius uniform in [0, r]; y_i = x_i exp(rho v_i / |v|).
std::vector<RelPoint> rel_ball_sample(const RelPoint& x, const Real& r, std::size_t n,
                                      std::uint64_t seed);

/// One point at exact relative distance r from x along a random direction
/// drawn from Rng::stream(seed, index).
RelPoint rel_sphere_point(const RelPoint& x, const Real& r, std::uint64_t seed,
                          std::uint64_t index);

/// Moves x by the log-coordinate displacement `step` (only chi(x) entries are
/// used): y_i = x_i exp(step_i).
RelPoint rel_exp_map(const RelPoint& x, std::span<const Real> step);

/// Frobenius / Euclidean distance.
Real abs_dist(const RelPoint& a, const RelPoint& b);
Real abs_dist_exact(std::span<const FpNumber> computed, std::span<const ExactReal> reference);

}  // namespace stabilis
