#pragma once

#include "stabilis/real.hpp"

#include <cstddef>
#include <vector>

namespace stabilis {

/// Dense row-major matrix of extended-precision reals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transposed() const;
  friend Matrix operator*(const Matrix& a, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

struct TopSingular {
  Real sigma;
  /// Unit right singular vector for sigma (length cols); empty if sigma == 0.
  std::vector<Real> right;
};

/// Largest singular value and its right singular vector by cyclic one-sided
/// Jacobi, sweeping until every column pair is orthogonal to 1e-30 relative.
TopSingular top_singular(const Matrix& m);

Real spectral_norm(const Matrix& m);

/// Euclidean norm of row i.
Real row_norm(const Matrix& m, std::size_t i);

}  // namespace stabilis
