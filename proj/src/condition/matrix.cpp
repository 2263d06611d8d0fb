#include "stabilis/matrix.hpp"

#include "stabilis/errors.hpp"

#include <algorithm>

namespace stabilis {

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  }
  return c;
}

namespace {

// One-sided Jacobi on the columns of w (m x n); v accumulates the rotations.
void orthogonalize_columns(Matrix& w, Matrix& v) {
  const Real tol("1e-30");
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Real alpha = 0;
        Real beta = 0;
        Real gamma = 0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += w(i, p) * w(i, p);
          beta += w(i, q) * w(i, q);
          gamma += w(i, p) * w(i, q);
        }
        if (gamma == 0 || abs(gamma) <= tol * sqrt(alpha * beta)) continue;
        rotated = true;
        const Real zeta = (beta - alpha) / (2 * gamma);
        const Real t = (zeta >= 0 ? Real(1) : Real(-1)) / (abs(zeta) + sqrt(1 + zeta * zeta));
        const Real c = 1 / sqrt(1 + t * t);
        const Real s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const Real a = w(i, p);
          const Real b = w(i, q);
          w(i, p) = c * a - s * b;
          w(i, q) = s * a + c * b;
        }
        for (std::size_t i = 0; i < v.rows(); ++i) {
          const Real a = v(i, p);
          const Real b = v(i, q);
          v(i, p) = c * a - s * b;
          v(i, q) = s * a + c * b;
        }
      }
    }
    if (!rotated) return;
  }
}

}  // namespace

TopSingular top_singular(const Matrix& m) {
  TopSingular out{Real(0), {}};
  if (m.rows() == 0 || m.cols() == 0) return out;
  Matrix w = m;
  Matrix v(m.cols(), m.cols());
  for (std::size_t i = 0; i < m.cols(); ++i) v(i, i) = 1;
  orthogonalize_columns(w, v);

  std::size_t best = 0;
  Real best_norm2 = -1;
  for (std::size_t j = 0; j < w.cols(); ++j) {
    Real n2 = 0;
    for (std::size_t i = 0; i < w.rows(); ++i) n2 += w(i, j) * w(i, j);
    if (n2 > best_norm2) {
      best_norm2 = n2;
      best = j;
    }
  }
  out.sigma = sqrt(best_norm2);
  if (out.sigma == 0) return out;
  out.right.resize(m.cols());
  for (std::size_t i = 0; i < m.cols(); ++i) out.right[i] = v(i, best);
  return out;
}

Real spectral_norm(const Matrix& m) {
  // Fewer columns means fewer pairs to rotate; ||M|| = ||M^T||.
  if (m.cols() > m.rows()) return top_singular(m.transposed()).sigma;
  return top_singular(m).sigma;
}

Real row_norm(const Matrix& m, std::size_t i) {
  Real s = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
  return sqrt(s);
}

}  // namespace stabilis
