#include "stabilis/catalog_function.hpp"

#include "stabilis/errors.hpp"

#include <algorithm>
#include <sstream>

namespace stabilis {

namespace {

Real dot(std::span<const int> coef, std::span<const Real> x) {
  Real s = 0;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (coef[i] != 0) s += coef[i] * x[i];
  }
  return s;
}

// A linear form vanishes identically on the component of x when all its
// coefficients on chi(x) are zero.
bool form_vanishes_on_component(std::span<const int> coef, std::span<const Real> x) {
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (coef[i] != 0 && x[i] != 0) return false;
  }
  return true;
}

// Sum-type component: zero value while some summand is nonzero.
bool cancelling_sum(std::span<const Real> terms) {
  Real s = 0;
  bool any = false;
  for (const auto& t : terms) {
    s += t;
    any = any || t != 0;
  }
  return any && s == 0;
}

std::vector<std::size_t> split_dims(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
  return out;
}

}  // namespace

const RationalMatrix& strassen_g_matrix() {
  static const RationalMatrix g = {
      {1, 0, 0, 1, -1, 0, 1},
      {0, 0, 1, 0, 1, 0, 0},
      {0, 1, 0, 1, 0, 0, 0},
      {1, -1, 1, 0, 0, 1, 0},
  };
  return g;
}

const BilinearForms& strassen_h_forms() {
  //                               a11 a12 a21 a22 b11 b12 b21 b22
  static const BilinearForms forms = {
      {
          {1, 0, 0, 1, 0, 0, 0, 0},
          {0, 0, 1, 1, 0, 0, 0, 0},
          {1, 0, 0, 0, 0, 0, 0, 0},
          {0, 0, 0, 1, 0, 0, 0, 0},
          {1, 1, 0, 0, 0, 0, 0, 0},
          {-1, 0, 1, 0, 0, 0, 0, 0},
          {0, 1, 0, -1, 0, 0, 0, 0},
      },
      {
          {0, 0, 0, 0, 1, 0, 0, 1},
          {0, 0, 0, 0, 1, 0, 0, 0},
          {0, 0, 0, 0, 0, 1, 0, -1},
          {0, 0, 0, 0, -1, 0, 1, 0},
          {0, 0, 0, 0, 0, 0, 0, 1},
          {0, 0, 0, 0, 1, 1, 0, 0},
          {0, 0, 0, 0, 0, 0, 1, 1},
      },
  };
  return forms;
}

CatalogFunction CatalogFunction::identity(std::size_t k) {
  return CatalogFunction(FunctionKind::identity, k, k);
}

CatalogFunction CatalogFunction::product(std::size_t k) {
  if (k == 0) throw InvalidArgument("product needs k >= 1");
  return CatalogFunction(FunctionKind::product, k, 1);
}

CatalogFunction CatalogFunction::sum(std::size_t k) {
  if (k == 0) throw InvalidArgument("sum needs k >= 1");
  return CatalogFunction(FunctionKind::sum, k, 1);
}

CatalogFunction CatalogFunction::hadamard(std::size_t k) {
  if (k == 0) throw InvalidArgument("hadamard needs k >= 1");
  return CatalogFunction(FunctionKind::hadamard, 2 * k, k);
}

CatalogFunction CatalogFunction::tensor(std::size_t k1, std::size_t k2) {
  if (k1 == 0 || k2 == 0) throw InvalidArgument("tensor needs k1, k2 >= 1");
  CatalogFunction f(FunctionKind::tensor, k1 + k2, k1 * k2);
  f.k1_ = k1;
  return f;
}

CatalogFunction CatalogFunction::linear_map(RationalMatrix a) {
  if (a.empty() || a.front().empty()) throw InvalidArgument("linear map needs a nonempty matrix");
  for (const auto& row : a) {
    if (row.size() != a.front().size()) throw InvalidArgument("ragged matrix");
  }
  CatalogFunction f(FunctionKind::linear_map, a.front().size(), a.size());
  f.matrix_ = std::move(a);
  return f;
}

CatalogFunction CatalogFunction::inner_product(std::size_t k) {
  if (k == 0) throw InvalidArgument("inner product needs k >= 1");
  return CatalogFunction(FunctionKind::inner_product, 2 * k, 1);
}

CatalogFunction CatalogFunction::copy(std::size_t k) {
  return CatalogFunction(FunctionKind::copy, k, 2 * k);
}

CatalogFunction CatalogFunction::squared_norm(std::size_t k) {
  return CatalogFunction(FunctionKind::squared_norm, k, 1);
}

CatalogFunction CatalogFunction::sqrt() { return CatalogFunction(FunctionKind::sqrt, 1, 1); }

CatalogFunction CatalogFunction::norm2(std::size_t k) {
  return CatalogFunction(FunctionKind::norm2, k, 1);
}

CatalogFunction CatalogFunction::power(long exponent) {
  if (exponent == 0) throw InvalidArgument("power needs a nonzero exponent");
  CatalogFunction f(FunctionKind::power, 1, 1);
  f.exponent_ = exponent;
  return f;
}

CatalogFunction CatalogFunction::affine(AffineOp op, Rational alpha) {
  if (op == AffineOp::div && alpha == 0) throw DivisionByZero();
  CatalogFunction f(FunctionKind::affine, 1, 1);
  f.op_ = op;
  f.alpha_ = std::move(alpha);
  return f;
}

CatalogFunction CatalogFunction::sin() { return CatalogFunction(FunctionKind::sin, 1, 1); }

CatalogFunction CatalogFunction::strassen_h() {
  return CatalogFunction(FunctionKind::strassen_h, 8, 7);
}

CatalogFunction CatalogFunction::strassen_g() {
  CatalogFunction f(FunctionKind::strassen_g, 7, 4);
  f.matrix_ = strassen_g_matrix();
  return f;
}

CatalogFunction CatalogFunction::matmul_entry(int i, int j) {
  if (i < 0 || i > 1 || j < 0 || j > 1) throw InvalidArgument("matmul entry index out of range");
  CatalogFunction f(FunctionKind::matmul_entry, 8, 1);
  f.entry_i_ = i;
  f.entry_j_ = j;
  return f;
}

CatalogFunction CatalogFunction::matmul_2x2() {
  return CatalogFunction(FunctionKind::matmul_2x2, 8, 4);
}

CatalogFunction CatalogFunction::compose(const CatalogFunction& g, const CatalogFunction& h) {
  if (g.input_dim() != h.output_dim()) {
    throw DimensionMismatch("cannot compose " + g.name() + " after " + h.name());
  }
  CatalogFunction f(FunctionKind::composite, h.input_dim(), g.output_dim());
  f.outer_ = std::make_shared<const CatalogFunction>(g);
  f.inner_ = std::make_shared<const CatalogFunction>(h);
  return f;
}

CatalogFunction CatalogFunction::from_name(const std::string& raw, std::size_t n,
                                           const std::string& param) {
  std::string name = raw;
  std::replace(name.begin(), name.end(), '_', '-');
  auto half = [&] {
    if (n % 2 != 0 || n == 0) throw InvalidArgument(name + " needs an even, nonzero dimension");
    return n / 2;
  };
  auto scalar = [&] {
    if (n != 1) throw InvalidArgument(name + " takes a scalar input");
  };
  auto eight = [&] {
    if (n != 8) throw InvalidArgument(name + " takes two 2x2 matrices (8 numbers)");
  };
  if (name == "identity") return identity(n);
  if (name == "product") return product(n);
  if (name == "sum") return sum(n);
  if (name == "hadamard") return hadamard(half());
  if (name == "inner-product") return inner_product(half());
  if (name == "copy") return copy(n);
  if (name == "squared-norm") return squared_norm(n);
  if (name == "norm2") return norm2(n);
  if (name == "sqrt") {
    scalar();
    return sqrt();
  }
  if (name == "sin") {
    scalar();
    return sin();
  }
  if (name == "power") {
    scalar();
    return power(param.empty() ? 2 : std::stol(param));
  }
  if (name == "affine") {
    scalar();
    const auto colon = param.find(':');
    if (colon == std::string::npos) throw InvalidArgument("affine needs --param op:alpha");
    const std::string op = param.substr(0, colon);
    const Rational alpha = parse_rational(param.substr(colon + 1));
    if (op == "add") return affine(AffineOp::add, alpha);
    if (op == "sub") return affine(AffineOp::sub, alpha);
    if (op == "mul") return affine(AffineOp::mul, alpha);
    if (op == "div") return affine(AffineOp::div, alpha);
    if (op == "rdiv") return affine(AffineOp::rdiv, alpha);
    throw InvalidArgument("unknown affine op '" + op + "'");
  }
  if (name == "tensor") {
    const std::size_t k1 = param.empty() ? half() : std::stoul(param);
    if (k1 == 0 || k1 >= n) throw InvalidArgument("tensor needs 0 < k1 < dimension");
    return tensor(k1, n - k1);
  }
  if (name == "linear-map") {
    // Rows separated by ';', entries by ','.
    RationalMatrix a;
    std::stringstream rows(param);
    std::string row;
    while (std::getline(rows, row, ';')) {
      std::vector<Rational> r;
      std::stringstream cells(row);
      std::string cell;
      while (std::getline(cells, cell, ',')) r.push_back(parse_rational(cell));
      if (r.size() != n) throw InvalidArgument("linear map rows must have one entry per input");
      a.push_back(std::move(r));
    }
    return linear_map(std::move(a));
  }
  if (name == "strassen-h") {
    eight();
    return strassen_h();
  }
  if (name == "strassen-g") {
    if (n != 7) throw InvalidArgument("strassen-g takes 7 numbers");
    return strassen_g();
  }
  if (name == "matmul-entry") {
    eight();
    const auto ij = split_dims(param.empty() ? "1,1" : param);
    if (ij.size() != 2) throw InvalidArgument("matmul-entry needs --param i,j");
    return matmul_entry(static_cast<int>(ij[0]) - 1, static_cast<int>(ij[1]) - 1);
  }
  if (name == "matmul-2x2") {
    eight();
    return matmul_2x2();
  }
  throw InvalidArgument("unknown function '" + raw + "'");
}

std::string CatalogFunction::name() const {
  switch (kind_) {
    case FunctionKind::identity: return "identity";
    case FunctionKind::product: return "product";
    case FunctionKind::sum: return "sum";
    case FunctionKind::hadamard: return "hadamard";
    case FunctionKind::tensor: return "tensor";
    case FunctionKind::linear_map: return "linear-map";
    case FunctionKind::inner_product: return "inner-product";
    case FunctionKind::copy: return "copy";
    case FunctionKind::squared_norm: return "squared-norm";
    case FunctionKind::sqrt: return "sqrt";
    case FunctionKind::norm2: return "norm2";
    case FunctionKind::power: return "power";
    case FunctionKind::affine: return "affine";
    case FunctionKind::sin: return "sin";
    case FunctionKind::strassen_h: return "strassen-h";
    case FunctionKind::strassen_g: return "strassen-g";
    case FunctionKind::matmul_entry: return "matmul-entry";
    case FunctionKind::matmul_2x2: return "matmul-2x2";
    case FunctionKind::composite: return outer_->name() + "∘" + inner_->name();
  }
  return "?";
}

void CatalogFunction::require_dim(std::span<const Real> x) const {
  if (x.size() != in_) {
    throw DimensionMismatch(name() + " expects " + std::to_string(in_) + " inputs, got " +
                            std::to_string(x.size()));
  }
}

bool CatalogFunction::in_domain(std::span<const Real> x) const {
  require_dim(x);
  for (const auto& v : x) {
    if (boost::multiprecision::isnan(v) || is_infinite(v)) return false;
  }
  switch (kind_) {
    case FunctionKind::sqrt: return x[0] >= 0;
    case FunctionKind::power: return exponent_ > 0 || x[0] != 0;
    case FunctionKind::affine: return op_ != AffineOp::rdiv || x[0] != 0;
    case FunctionKind::composite: {
      if (!inner_->in_domain(x)) return false;
      const auto hx = inner_->evaluate(x);
      return outer_->in_domain(hx);
    }
    default: return true;
  }
}

std::vector<Real> CatalogFunction::evaluate(std::span<const Real> x) const {
  require_dim(x);
  if (!in_domain(x)) throw DomainError(name() + " evaluated outside its domain");
  std::vector<Real> y(out_);
  switch (kind_) {
    case FunctionKind::identity:
      std::copy(x.begin(), x.end(), y.begin());
      break;
    case FunctionKind::product:
      y[0] = 1;
      for (const auto& v : x) y[0] *= v;
      break;
    case FunctionKind::sum:
      for (const auto& v : x) y[0] += v;
      break;
    case FunctionKind::hadamard:
      for (std::size_t i = 0; i < out_; ++i) y[i] = x[i] * x[out_ + i];
      break;
    case FunctionKind::tensor: {
      const std::size_t k2 = in_ - k1_;
      for (std::size_t i = 0; i < k1_; ++i) {
        for (std::size_t j = 0; j < k2; ++j) y[i * k2 + j] = x[i] * x[k1_ + j];
      }
      break;
    }
    case FunctionKind::linear_map:
    case FunctionKind::strassen_g:
      for (std::size_t i = 0; i < out_; ++i) {
        for (std::size_t j = 0; j < in_; ++j) {
          if (matrix_[i][j] != 0) y[i] += to_real(matrix_[i][j]) * x[j];
        }
      }
      break;
    case FunctionKind::inner_product: {
      const std::size_t k = in_ / 2;
      for (std::size_t i = 0; i < k; ++i) y[0] += x[i] * x[k + i];
      break;
    }
    case FunctionKind::copy:
      for (std::size_t i = 0; i < in_; ++i) y[i] = y[in_ + i] = x[i];
      break;
    case FunctionKind::squared_norm:
      for (const auto& v : x) y[0] += v * v;
      break;
    case FunctionKind::sqrt:
      y[0] = boost::multiprecision::sqrt(x[0]);
      break;
    case FunctionKind::norm2:
      for (const auto& v : x) y[0] += v * v;
      y[0] = boost::multiprecision::sqrt(y[0]);
      break;
    case FunctionKind::power:
      y[0] = exponent_ > 0 ? Real(pow(x[0], exponent_)) : Real(1 / pow(x[0], -exponent_));
      break;
    case FunctionKind::affine: {
      const Real a = to_real(alpha_);
      switch (op_) {
        case AffineOp::add: y[0] = x[0] + a; break;
        case AffineOp::sub: y[0] = x[0] - a; break;
        case AffineOp::mul: y[0] = x[0] * a; break;
        case AffineOp::div: y[0] = x[0] / a; break;
        case AffineOp::rdiv: y[0] = a / x[0]; break;
      }
      break;
    }
    case FunctionKind::sin:
      y[0] = boost::multiprecision::sin(x[0]);
      break;
    case FunctionKind::strassen_h: {
      const auto& f = strassen_h_forms();
      for (std::size_t m = 0; m < 7; ++m) y[m] = dot(f.left[m], x) * dot(f.right[m], x);
      break;
    }
    case FunctionKind::matmul_entry:
      y[0] = x[2 * entry_i_] * x[4 + entry_j_] + x[2 * entry_i_ + 1] * x[6 + entry_j_];
      break;
    case FunctionKind::matmul_2x2:
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) y[2 * i + j] = x[2 * i] * x[4 + j] + x[2 * i + 1] * x[6 + j];
      }
      break;
    case FunctionKind::composite:
      return outer_->evaluate(inner_->evaluate(x));
  }
  return y;
}

Matrix CatalogFunction::jacobian(std::span<const Real> x) const {
  require_dim(x);
  Matrix j(out_, in_);
  switch (kind_) {
    case FunctionKind::identity:
      for (std::size_t i = 0; i < in_; ++i) j(i, i) = 1;
      break;
    case FunctionKind::product:
      for (std::size_t c = 0; c < in_; ++c) {
        Real p = 1;
        for (std::size_t i = 0; i < in_; ++i) {
          if (i != c) p *= x[i];
        }
        j(0, c) = p;
      }
      break;
    case FunctionKind::sum:
      for (std::size_t c = 0; c < in_; ++c) j(0, c) = 1;
      break;
    case FunctionKind::hadamard:
      for (std::size_t i = 0; i < out_; ++i) {
        j(i, i) = x[out_ + i];
        j(i, out_ + i) = x[i];
      }
      break;
    case FunctionKind::tensor: {
      const std::size_t k2 = in_ - k1_;
      for (std::size_t a = 0; a < k1_; ++a) {
        for (std::size_t b = 0; b < k2; ++b) {
          j(a * k2 + b, a) = x[k1_ + b];
          j(a * k2 + b, k1_ + b) = x[a];
        }
      }
      break;
    }
    case FunctionKind::linear_map:
    case FunctionKind::strassen_g:
      for (std::size_t i = 0; i < out_; ++i) {
        for (std::size_t c = 0; c < in_; ++c) j(i, c) = to_real(matrix_[i][c]);
      }
      break;
    case FunctionKind::inner_product: {
      const std::size_t k = in_ / 2;
      for (std::size_t i = 0; i < k; ++i) {
        j(0, i) = x[k + i];
        j(0, k + i) = x[i];
      }
      break;
    }
    case FunctionKind::copy:
      for (std::size_t i = 0; i < in_; ++i) j(i, i) = j(in_ + i, i) = 1;
      break;
    case FunctionKind::squared_norm:
      for (std::size_t c = 0; c < in_; ++c) j(0, c) = 2 * x[c];
      break;
    case FunctionKind::sqrt:
      // The derivative blows up at 0, where the relative Jacobian scales it by x = 0.
      if (x[0] > 0) j(0, 0) = 1 / (2 * boost::multiprecision::sqrt(x[0]));
      break;
    case FunctionKind::norm2: {
      Real n2 = 0;
      for (const auto& v : x) n2 += v * v;
      if (n2 > 0) {
        const Real n = boost::multiprecision::sqrt(n2);
        for (std::size_t c = 0; c < in_; ++c) j(0, c) = x[c] / n;
      }
      break;
    }
    case FunctionKind::power:
      if (exponent_ == 1) {
        j(0, 0) = 1;
      } else if (exponent_ > 1) {
        j(0, 0) = exponent_ * pow(x[0], exponent_ - 1);
      } else {
        j(0, 0) = exponent_ / pow(x[0], 1 - exponent_);
      }
      break;
    case FunctionKind::affine: {
      const Real a = to_real(alpha_);
      switch (op_) {
        case AffineOp::add:
        case AffineOp::sub: j(0, 0) = 1; break;
        case AffineOp::mul: j(0, 0) = a; break;
        case AffineOp::div: j(0, 0) = 1 / a; break;
        case AffineOp::rdiv: j(0, 0) = -a / (x[0] * x[0]); break;
      }
      break;
    }
    case FunctionKind::sin:
      j(0, 0) = boost::multiprecision::cos(x[0]);
      break;
    case FunctionKind::strassen_h: {
      const auto& f = strassen_h_forms();
      for (std::size_t m = 0; m < 7; ++m) {
        const Real l = dot(f.left[m], x);
        const Real r = dot(f.right[m], x);
        for (std::size_t c = 0; c < 8; ++c) j(m, c) = f.left[m][c] * r + f.right[m][c] * l;
      }
      break;
    }
    case FunctionKind::matmul_entry:
    case FunctionKind::matmul_2x2: {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          if (kind_ == FunctionKind::matmul_entry && (a != entry_i_ || b != entry_j_)) continue;
          const std::size_t row = kind_ == FunctionKind::matmul_entry ? 0 : 2 * a + b;
          j(row, 2 * a) = x[4 + b];
          j(row, 2 * a + 1) = x[6 + b];
          j(row, 4 + b) = x[2 * a];
          j(row, 6 + b) = x[2 * a + 1];
        }
      }
      break;
    }
    case FunctionKind::composite: {
      const auto hx = inner_->evaluate(x);
      return outer_->jacobian(hx) * inner_->jacobian(x);
    }
  }
  return j;
}

std::vector<bool> CatalogFunction::ill_posed_components(std::span<const Real> x) const {
  require_dim(x);
  std::vector<bool> bad(out_, false);
  switch (kind_) {
    case FunctionKind::sum:
      bad[0] = cancelling_sum(x);
      break;
    case FunctionKind::linear_map:
    case FunctionKind::strassen_g:
      for (std::size_t i = 0; i < out_; ++i) {
        std::vector<Real> terms(in_);
        for (std::size_t c = 0; c < in_; ++c) terms[c] = to_real(matrix_[i][c]) * x[c];
        bad[i] = cancelling_sum(terms);
      }
      break;
    case FunctionKind::inner_product: {
      const std::size_t k = in_ / 2;
      std::vector<Real> terms(k);
      for (std::size_t i = 0; i < k; ++i) terms[i] = x[i] * x[k + i];
      bad[0] = cancelling_sum(terms);
      break;
    }
    case FunctionKind::affine:
      if (op_ == AffineOp::add || op_ == AffineOp::sub) {
        const Real a = to_real(alpha_);
        const Real v = op_ == AffineOp::add ? x[0] + a : x[0] - a;
        bad[0] = v == 0 && x[0] != 0;
      }
      break;
    case FunctionKind::sin:
      bad[0] = x[0] != 0 && boost::multiprecision::sin(x[0]) == 0;
      break;
    case FunctionKind::strassen_h: {
      const auto& f = strassen_h_forms();
      for (std::size_t m = 0; m < 7; ++m) {
        const bool l_dead = form_vanishes_on_component(f.left[m], x);
        const bool r_dead = form_vanishes_on_component(f.right[m], x);
        const bool zero = dot(f.left[m], x) == 0 || dot(f.right[m], x) == 0;
        bad[m] = zero && !l_dead && !r_dead;
      }
      break;
    }
    case FunctionKind::matmul_entry:
    case FunctionKind::matmul_2x2:
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          if (kind_ == FunctionKind::matmul_entry && (a != entry_i_ || b != entry_j_)) continue;
          const std::size_t row = kind_ == FunctionKind::matmul_entry ? 0 : 2 * a + b;
          const Real terms[2] = {x[2 * a] * x[4 + b], x[2 * a + 1] * x[6 + b]};
          bad[row] = cancelling_sum(terms);
        }
      }
      break;
    case FunctionKind::composite: {
      // A zero output is ill-posed when it moves to first order in log
      // coordinates or when the outer map is ill-posed there.
      const auto hx = inner_->evaluate(x);
      const auto outer_bad = outer_->ill_posed_components(hx);
      const auto gx = outer_->evaluate(hx);
      Matrix j = jacobian(x);
      for (std::size_t i = 0; i < out_; ++i) {
        if (gx[i] != 0) continue;
        bool moving = outer_bad[i];
        for (std::size_t c = 0; c < in_ && !moving; ++c) moving = j(i, c) * x[c] != 0;
        bad[i] = moving;
      }
      break;
    }
    default:
      break;
  }
  return bad;
}

bool CatalogFunction::ill_posed(std::span<const Real> x) const {
  const auto bad = ill_posed_components(x);
  return std::any_of(bad.begin(), bad.end(), [](bool b) { return b; });
}

Matrix relative_jacobian(std::span<const Real> x, std::span<const Real> fx, const Matrix& j) {
  if (j.rows() != fx.size() || j.cols() != x.size()) {
    throw DimensionMismatch("Jacobian shape does not match the point and its image");
  }
  Matrix r(j.rows(), j.cols());
  for (std::size_t i = 0; i < j.rows(); ++i) {
    if (fx[i] == 0) continue;
    for (std::size_t c = 0; c < j.cols(); ++c) {
      if (x[c] != 0) r(i, c) = j(i, c) * x[c] / fx[i];
    }
  }
  return r;
}

}  // namespace stabilis
