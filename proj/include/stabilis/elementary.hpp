#pragma once

// Certified high-precision constants and elementary functions on ExactReal,
// computed with fixed-point integer arithmetic and explicit error bounds.

#include "stabilis/exact_real.hpp"
#include "stabilis/fp_number.hpp"

#include <functional>

namespace stabilis {

/// Enclosure of pi with radius <= 2^-bits.
ExactReal pi_enclosure(long bits);

/// Enclosure of sin(x) with radius <= 2^-bits + x.radius(). Argument reduction
/// modulo pi, then the Taylor series on [-pi/2, pi/2].
ExactReal sin_enclosure(const ExactReal& x, long bits);

/// Enclosure of sqrt(x) with relative radius <= 2^-bits; x must be >= 0.
ExactReal sqrt_enclosure(const ExactReal& x, long bits);

/// Ziv loop: evaluate at `initial_guard` extra bits, double the guard until
/// the enclosure decides the rounding at precision p. Throws EnclosureTooWide
/// past `max_guard` bits.
FpNumber round_correctly(const std::function<ExactReal(long bits)>& evaluate, Precision p,
                         long initial_guard = 64, long max_guard = 1L << 16);

}  // namespace stabilis
