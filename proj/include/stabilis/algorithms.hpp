#pragma once

// Finite-precision algorithms over F_u for the catalog functions, and the
// exact references they are measured against.

#include "stabilis/catalog_function.hpp"
#include "stabilis/exact_real.hpp"
#include "stabilis/fp_number.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace stabilis {

using FpVector = std::vector<FpNumber>;
using ExactVector = std::vector<ExactReal>;

FpVector round_all(std::span<const ExactReal> x, Precision p);

/// Left-to-right products: ((x1 x2) x3) ... ; k >= 1.
FpNumber naive_product(std::span<const FpNumber> x, Precision p);
/// Left-to-right sums; k >= 1.
FpNumber naive_sum(std::span<const FpNumber> x, Precision p);
FpVector hadamard(std::span<const FpNumber> x, std::span<const FpNumber> y, Precision p);
/// Output index i * y.size() + j.
FpVector tensor(std::span<const FpNumber> x, std::span<const FpNumber> y, Precision p);
FpNumber affine(const FpNumber& x, AffineOp op, const FpNumber& alpha, Precision p);
/// Repeated multiplication; negative exponents take one final reciprocal.
FpNumber power(const FpNumber& x, long exponent, Precision p);
FpNumber inner_product(std::span<const FpNumber> x, std::span<const FpNumber> y, Precision p);
/// Row-wise a_i ⊛ x followed by naive_sum.
FpVector linear_map(const std::vector<FpVector>& a, std::span<const FpNumber> x, Precision p);
FpVector copy(std::span<const FpNumber> x);
FpNumber squared_norm(std::span<const FpNumber> x, Precision p);

/// Newton's method for x^2 = g 4^-k from 1/2 with g 4^-k in [1/4, 1),
/// stopped when |x_{n+1} - x_n| <= 4u x_n or after 2t steps, then scaled by
/// 2^k. Throws DomainError for g < 0.
FpNumber babylonian_sqrt(const FpNumber& g, Precision p);
/// squared_norm followed by babylonian_sqrt.
FpNumber norm2(std::span<const FpNumber> x, Precision p);

/// 2x2 matrices row-major, A then B (8 numbers).
FpVector strassen_h(std::span<const FpNumber> ab, Precision p);
FpVector strassen_g(std::span<const FpNumber> m, Precision p);
FpVector strassen_2x2(std::span<const FpNumber> ab, Precision p);
/// Stacked length-2 inner products.
FpVector matmul_2x2(std::span<const FpNumber> ab, Precision p);

/// Certified sin(x) to `guard` bits.
ExactReal high_precision_sin(const ExactReal& x, long guard);

enum class SineAlgorithm {
  /// sin of the (already rounded) argument, correctly rounded to t bits.
  faithful,
  /// Reduction by a t-bit pi and a Taylor series, all in F_u.
  naive,
};

FpNumber working_sin(const FpNumber& x, Precision p, SineAlgorithm algorithm);

/// Exact semantics of a few algorithms, for references.
ExactVector exact_strassen_or_matmul(std::span<const ExactReal> ab);

/// An algorithm f̂^u together with the problem f it solves.
struct NumericalAlgorithm {
  std::string id;
  CatalogFunction problem;
  /// Size parameter k used by stability polynomials.
  std::size_t k = 1;
  /// Runs on inputs already in F_u.
  std::function<FpVector(std::span<const FpNumber>, Precision)> evaluate;
  /// f(x) to about `guard` bits relative per coordinate.
  std::function<ExactVector(std::span<const ExactReal>, long guard)> exact_reference;

  /// Rounds the inputs to t bits, then evaluates.
  FpVector run(std::span<const ExactReal> x, Precision p) const {
    const FpVector r = round_all(x, p);
    return evaluate(r, p);
  }
};

/// Known ids: identity, naive-sum, naive-product, inner-product, norm2,
/// babylonian-sqrt, matmul-2x2, strassen-2x2, squared-norm, copy, hadamard,
/// power. `k` is the vector length where one applies (power: the exponent).
NumericalAlgorithm make_algorithm(const std::string& id, std::size_t k = 1);
/// Row-wise inner products with the matrix rounded to F_u.
NumericalAlgorithm make_linear_map_algorithm(RationalMatrix a);

}  // namespace stabilis
