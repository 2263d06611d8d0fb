#pragma once

// Exact (extended-precision) semantics of the elementary catalog functions:
// evaluation, hand-coded Jacobians, domains and the analytic ill-posed locus.

#include "stabilis/matrix.hpp"
#include "stabilis/real.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace stabilis {

enum class FunctionKind {
  identity,
  product,
  sum,
  hadamard,
  tensor,
  linear_map,
  inner_product,
  copy,
  squared_norm,
  sqrt,
  norm2,
  power,
  affine,
  sin,
  strassen_h,
  strassen_g,
  matmul_entry,
  matmul_2x2,
  composite,
};

/// x∘α for a fixed scalar α; rdiv is α / x.
enum class AffineOp { add, sub, mul, div, rdiv };

using RationalMatrix = std::vector<std::vector<Rational>>;

/// 2x2 matrices are flattened row-major, A before B: (a11 a12 a21 a22 b11 b12 b21 b22).
class CatalogFunction {
 public:
  static CatalogFunction identity(std::size_t k);
  static CatalogFunction product(std::size_t k);
  static CatalogFunction sum(std::size_t k);
  /// (x, y) in R^k x R^k -> x ⊛ y.
  static CatalogFunction hadamard(std::size_t k);
  /// (x, y) in R^k1 x R^k2 -> x ⊗ y, output index i*k2 + j.
  static CatalogFunction tensor(std::size_t k1, std::size_t k2);
  static CatalogFunction linear_map(RationalMatrix a);
  /// (x, y) in R^k x R^k -> <x, y>.
  static CatalogFunction inner_product(std::size_t k);
  /// x -> (x, x).
  static CatalogFunction copy(std::size_t k);
  static CatalogFunction squared_norm(std::size_t k);
  static CatalogFunction sqrt();
  static CatalogFunction norm2(std::size_t k);
  static CatalogFunction power(long exponent);
  static CatalogFunction affine(AffineOp op, Rational alpha);
  static CatalogFunction sin();
  static CatalogFunction strassen_h();
  static CatalogFunction strassen_g();
  /// (A, B) -> (AB)_ij, indices 0-based.
  static CatalogFunction matmul_entry(int i, int j);
  static CatalogFunction matmul_2x2();
  /// g ∘ h.
  static CatalogFunction compose(const CatalogFunction& g, const CatalogFunction& h);

  /// Builds a function from its command-line name for a point of dimension
  /// `input_dim`. `param` carries the exponent (power), α (affine), or k1 (tensor).
  static CatalogFunction from_name(const std::string& name, std::size_t input_dim,
                                   const std::string& param = "");

  FunctionKind kind() const { return kind_; }
  std::string name() const;
  std::size_t input_dim() const { return in_; }
  std::size_t output_dim() const { return out_; }

  long exponent() const { return exponent_; }
  AffineOp affine_op() const { return op_; }
  const Rational& alpha() const { return alpha_; }
  const RationalMatrix& matrix() const { return matrix_; }
  std::size_t k1() const { return k1_; }
  int entry_row() const { return entry_i_; }
  int entry_col() const { return entry_j_; }
  const CatalogFunction& outer() const { return *outer_; }
  const CatalogFunction& inner() const { return *inner_; }

  bool in_domain(std::span<const Real> x) const;
  std::vector<Real> evaluate(std::span<const Real> x) const;
  /// D_x f, output_dim x input_dim.
  Matrix jacobian(std::span<const Real> x) const;
  /// Per output component: true when that component changes sign pattern
  /// arbitrarily close to x (condition number infinite), decided analytically.
  std::vector<bool> ill_posed_components(std::span<const Real> x) const;
  bool ill_posed(std::span<const Real> x) const;

 private:
  CatalogFunction(FunctionKind kind, std::size_t in, std::size_t out)
      : kind_(kind), in_(in), out_(out) {}
  void require_dim(std::span<const Real> x) const;

  FunctionKind kind_;
  std::size_t in_;
  std::size_t out_;
  long exponent_ = 1;
  AffineOp op_ = AffineOp::add;
  Rational alpha_ = 0;
  RationalMatrix matrix_;
  std::size_t k1_ = 0;
  int entry_i_ = 0;
  int entry_j_ = 0;
  std::shared_ptr<const CatalogFunction> outer_;
  std::shared_ptr<const CatalogFunction> inner_;
};

/// Relative Jacobian diag(f(x))^+ D_x f diag(x); only nonzero entries of x
/// and f(x) contribute.
Matrix relative_jacobian(std::span<const Real> x, std::span<const Real> fx, const Matrix& j);

/// The strassen_g coefficient matrix (4 x 7).
const RationalMatrix& strassen_g_matrix();

/// Strassen's seven products as pairs of linear forms over the 8 inputs:
/// h_m = <left[m], (A,B)> * <right[m], (A,B)>.
struct BilinearForms {
  std::vector<std::vector<int>> left;
  std::vector<std::vector<int>> right;
};
const BilinearForms& strassen_h_forms();

}  // namespace stabilis
