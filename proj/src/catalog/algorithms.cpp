#include "stabilis/algorithms.hpp"

#include "stabilis/elementary.hpp"
#include "stabilis/errors.hpp"

namespace stabilis {

namespace {

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch("operand lengths differ");
}

void require_nonempty(std::size_t n) {
  if (n == 0) throw InvalidArgument("empty operand");
}

FpNumber fp_dot(std::span<const int> coef, std::span<const FpNumber> x, Precision p) {
  // Sums and differences of at most two inputs, in the order they appear.
  FpNumber acc;
  bool first = true;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (coef[i] == 0) continue;
    if (first) {
      acc = coef[i] > 0 ? x[i] : -x[i];
      first = false;
    } else {
      acc = coef[i] > 0 ? fp_add(acc, x[i], p) : fp_sub(acc, x[i], p);
    }
  }
  return acc;
}

ExactReal exact_dot(std::span<const int> coef, std::span<const ExactReal> x) {
  ExactReal acc(Rational(0));
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (coef[i] != 0) acc = acc + ExactReal(Rational(coef[i])) * x[i];
  }
  return acc;
}

ExactVector exact_sqrt_norm(std::span<const ExactReal> x, long guard) {
  ExactReal s(Rational(0));
  for (const auto& v : x) s = s + v * v;
  return {sqrt_enclosure(s, guard)};
}

}  // namespace

FpVector round_all(std::span<const ExactReal> x, Precision p) {
  FpVector out;
  out.reserve(x.size());
  for (const auto& v : x) {
    out.push_back(round(v, p));
  }
  return out;
}

FpNumber naive_product(std::span<const FpNumber> x, Precision p) {
  require_nonempty(x.size());
  FpNumber acc = x[0];
  for (std::size_t i = 1; i < x.size(); ++i) acc = fp_mul(acc, x[i], p);
  return x.size() == 1 ? round(acc.to_rational(), p) : acc;
}

FpNumber naive_sum(std::span<const FpNumber> x, Precision p) {
  require_nonempty(x.size());
  FpNumber acc = x[0];
  for (std::size_t i = 1; i < x.size(); ++i) acc = fp_add(acc, x[i], p);
  return x.size() == 1 ? round(acc.to_rational(), p) : acc;
}

FpVector hadamard(std::span<const FpNumber> x, std::span<const FpNumber> y, Precision p) {
  require_same(x.size(), y.size());
  FpVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = fp_mul(x[i], y[i], p);
  return out;
}

FpVector tensor(std::span<const FpNumber> x, std::span<const FpNumber> y, Precision p) {
  FpVector out(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) out[i * y.size() + j] = fp_mul(x[i], y[j], p);
  }
  return out;
}

FpNumber affine(const FpNumber& x, AffineOp op, const FpNumber& alpha, Precision p) {
  switch (op) {
    case AffineOp::add: return fp_add(x, alpha, p);
    case AffineOp::sub: return fp_sub(x, alpha, p);
    case AffineOp::mul: return fp_mul(x, alpha, p);
    case AffineOp::div: return fp_div(x, alpha, p);
    case AffineOp::rdiv: return fp_div(alpha, x, p);
  }
  throw InvalidArgument("unknown affine op");
}

FpNumber power(const FpNumber& x, long exponent, Precision p) {
  if (exponent == 0) throw InvalidArgument("power needs a nonzero exponent");
  const long n = exponent > 0 ? exponent : -exponent;
  FpNumber acc = round(x.to_rational(), p);
  for (long i = 1; i < n; ++i) acc = fp_mul(acc, x, p);
  if (exponent < 0) acc = fp_div(FpNumber::from_int(1, p), acc, p);
  return acc;
}

FpNumber inner_product(std::span<const FpNumber> x, std::span<const FpNumber> y, Precision p) {
  const FpVector z = hadamard(x, y, p);
  return naive_sum(z, p);
}

FpVector linear_map(const std::vector<FpVector>& a, std::span<const FpNumber> x, Precision p) {
  FpVector out;
  out.reserve(a.size());
  for (const auto& row : a) out.push_back(inner_product(row, x, p));
  return out;
}

FpVector copy(std::span<const FpNumber> x) {
  FpVector out(x.begin(), x.end());
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

FpNumber squared_norm(std::span<const FpNumber> x, Precision p) { return inner_product(x, x, p); }

FpNumber babylonian_sqrt(const FpNumber& g, Precision p) {
  if (g.sign() < 0) throw DomainError("square root of a negative number");
  if (g.is_zero()) return FpNumber();
  // 2^(E-1) <= g < 2^E; k = ceil(E/2) gives 4^(k-1) <= g < 4^k.
  const std::int64_t e = g.exponent();
  const std::int64_t k = e >= 0 ? (e + 1) / 2 : -((-e) / 2);
  const FpNumber s = round(g.to_rational(), p).ldexp(-2 * k);
  const FpNumber tol_scale = FpNumber::from_int(1, p).ldexp(2 - p.bits());  // 4u
  FpNumber x = FpNumber::from_int(1, p).ldexp(-1);
  for (int it = 0; it < 2 * p.bits(); ++it) {
    const FpNumber next = fp_add(x, fp_div(s, x, p), p).ldexp(-1);
    const FpNumber step = fp_sub(next, x, p).abs();
    const bool done = step <= fp_mul(tol_scale, x, p);
    x = next;
    if (done) break;
  }
  return x.ldexp(k);
}

FpNumber norm2(std::span<const FpNumber> x, Precision p) {
  return babylonian_sqrt(squared_norm(x, p), p);
}

FpVector strassen_h(std::span<const FpNumber> ab, Precision p) {
  if (ab.size() != 8) throw DimensionMismatch("strassen_h takes 8 inputs");
  const auto& f = strassen_h_forms();
  FpVector out(7);
  for (std::size_t m = 0; m < 7; ++m) {
    out[m] = fp_mul(fp_dot(f.left[m], ab, p), fp_dot(f.right[m], ab, p), p);
  }
  return out;
}

FpVector strassen_g(std::span<const FpNumber> m, Precision p) {
  if (m.size() != 7) throw DimensionMismatch("strassen_g takes 7 inputs");
  return {
      fp_add(fp_sub(fp_add(m[0], m[3], p), m[4], p), m[6], p),
      fp_add(m[2], m[4], p),
      fp_add(m[1], m[3], p),
      fp_add(fp_add(fp_sub(m[0], m[1], p), m[2], p), m[5], p),
  };
}

FpVector strassen_2x2(std::span<const FpNumber> ab, Precision p) {
  return strassen_g(strassen_h(ab, p), p);
}

FpVector matmul_2x2(std::span<const FpNumber> ab, Precision p) {
  if (ab.size() != 8) throw DimensionMismatch("matmul_2x2 takes 8 inputs");
  FpVector out(4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const FpNumber row[2] = {ab[2 * i], ab[2 * i + 1]};
      const FpNumber col[2] = {ab[4 + j], ab[6 + j]};
      out[2 * i + j] = inner_product(row, col, p);
    }
  }
  return out;
}

ExactReal high_precision_sin(const ExactReal& x, long guard) { return sin_enclosure(x, guard); }

FpNumber working_sin(const FpNumber& x, Precision p, SineAlgorithm algorithm) {
  if (algorithm == SineAlgorithm::faithful) {
    const ExactReal ex = to_exact(x);
    return round_correctly([&](long bits) { return sin_enclosure(ex, bits); }, p);
  }
  const FpNumber pi = round_correctly([](long bits) { return pi_enclosure(bits); }, p);
  const Integer n = nearest_integer(fp_div(x, pi, p));
  const FpNumber n_hat = round(Rational(n), p);
  const FpNumber r = fp_sub(x, fp_mul(n_hat, pi, p), p);
  const FpNumber r2 = fp_mul(r, r, p);
  FpNumber term = r;
  FpNumber sum = r;
  for (long j = 1; j < 4 * p.bits(); ++j) {
    const FpNumber denom = FpNumber::from_int((2 * j) * (2 * j + 1), Precision(64));
    term = -fp_div(fp_mul(term, r2, p), denom, p);
    if (term.is_zero()) break;
    const FpNumber next = fp_add(sum, term, p);
    if (next == sum) break;
    sum = next;
  }
  return mpz_odd_p(nearest_integer(n_hat).get_mpz_t()) ? -sum : sum;
}

ExactVector exact_strassen_or_matmul(std::span<const ExactReal> ab) {
  ExactVector c(4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c[2 * i + j] = ab[2 * i] * ab[4 + j] + ab[2 * i + 1] * ab[6 + j];
  }
  return c;
}

NumericalAlgorithm make_algorithm(const std::string& id, std::size_t k) {
  using Span = std::span<const FpNumber>;
  using ESpan = std::span<const ExactReal>;
  if (k == 0) throw InvalidArgument("algorithm size must be >= 1");
  if (id == "identity") {
    return {id, CatalogFunction::identity(k), k,
            [](Span x, Precision p) {
              FpVector out;
              for (const auto& v : x) out.push_back(round(v.to_rational(), p));
              return out;
            },
            [](ESpan x, long) { return ExactVector(x.begin(), x.end()); }};
  }
  if (id == "naive-sum") {
    return {id, CatalogFunction::sum(k), k,
            [](Span x, Precision p) { return FpVector{naive_sum(x, p)}; },
            [](ESpan x, long) {
              ExactReal s(Rational(0));
              for (const auto& v : x) s = s + v;
              return ExactVector{s};
            }};
  }
  if (id == "naive-product") {
    return {id, CatalogFunction::product(k), k,
            [](Span x, Precision p) { return FpVector{naive_product(x, p)}; },
            [](ESpan x, long) {
              ExactReal s(Rational(1));
              for (const auto& v : x) s = s * v;
              return ExactVector{s};
            }};
  }
  if (id == "inner-product") {
    return {id, CatalogFunction::inner_product(k), k,
            [k](Span x, Precision p) {
              return FpVector{inner_product(x.subspan(0, k), x.subspan(k), p)};
            },
            [k](ESpan x, long) {
              ExactReal s(Rational(0));
              for (std::size_t i = 0; i < k; ++i) s = s + x[i] * x[k + i];
              return ExactVector{s};
            }};
  }
  if (id == "squared-norm") {
    return {id, CatalogFunction::squared_norm(k), k,
            [](Span x, Precision p) { return FpVector{squared_norm(x, p)}; },
            [](ESpan x, long) {
              ExactReal s(Rational(0));
              for (const auto& v : x) s = s + v * v;
              return ExactVector{s};
            }};
  }
  if (id == "norm2") {
    return {id, CatalogFunction::norm2(k), k,
            [](Span x, Precision p) { return FpVector{norm2(x, p)}; }, exact_sqrt_norm};
  }
  if (id == "babylonian-sqrt") {
    return {id, CatalogFunction::sqrt(), 1,
            [](Span x, Precision p) { return FpVector{babylonian_sqrt(x[0], p)}; },
            [](ESpan x, long guard) { return ExactVector{sqrt_enclosure(x[0], guard)}; }};
  }
  if (id == "copy") {
    return {id, CatalogFunction::copy(k), k, [](Span x, Precision p) {
              FpVector out;
              for (const auto& v : copy(x)) out.push_back(round(v.to_rational(), p));
              return out;
            },
            [](ESpan x, long) {
              ExactVector out(x.begin(), x.end());
              out.insert(out.end(), x.begin(), x.end());
              return out;
            }};
  }
  if (id == "hadamard") {
    return {id, CatalogFunction::hadamard(k), k,
            [k](Span x, Precision p) { return hadamard(x.subspan(0, k), x.subspan(k), p); },
            [k](ESpan x, long) {
              ExactVector out(k);
              for (std::size_t i = 0; i < k; ++i) out[i] = x[i] * x[k + i];
              return out;
            }};
  }
  if (id == "power") {
    const long e = static_cast<long>(k);
    return {id, CatalogFunction::power(e), k,
            [e](Span x, Precision p) { return FpVector{power(x[0], e, p)}; },
            [e](ESpan x, long) {
              ExactReal s(Rational(1));
              for (long i = 0; i < e; ++i) s = s * x[0];
              return ExactVector{s};
            }};
  }
  if (id == "matmul-2x2") {
    return {id, CatalogFunction::matmul_2x2(), 8,
            [](Span x, Precision p) { return matmul_2x2(x, p); },
            [](ESpan x, long) { return exact_strassen_or_matmul(x); }};
  }
  if (id == "strassen-2x2") {
    return {id, CatalogFunction::matmul_2x2(), 8,
            [](Span x, Precision p) { return strassen_2x2(x, p); },
            [](ESpan x, long) {
              // Strassen's scheme evaluated exactly.
              const auto& f = strassen_h_forms();
              ExactVector m(7);
              for (std::size_t i = 0; i < 7; ++i) m[i] = exact_dot(f.left[i], x) * exact_dot(f.right[i], x);
              const auto& g = strassen_g_matrix();
              ExactVector c(4);
              for (std::size_t i = 0; i < 4; ++i) {
                ExactReal s(Rational(0));
                for (std::size_t j = 0; j < 7; ++j) {
                  if (g[i][j] != 0) s = s + ExactReal(g[i][j]) * m[j];
                }
                c[i] = s;
              }
              return c;
            }};
  }
  throw InvalidArgument("unknown algorithm '" + id + "'");
}

NumericalAlgorithm make_linear_map_algorithm(RationalMatrix a) {
  CatalogFunction problem = CatalogFunction::linear_map(a);
  const std::size_t k = problem.input_dim();
  return {"linear-map", problem, k,
          [a](std::span<const FpNumber> x, Precision p) {
            std::vector<FpVector> rounded;
            for (const auto& row : a) {
              FpVector r;
              for (const auto& v : row) r.push_back(round(v, p));
              rounded.push_back(std::move(r));
            }
            return linear_map(rounded, x, p);
          },
          [a](std::span<const ExactReal> x, long) {
            ExactVector out;
            for (const auto& row : a) {
              ExactReal s(Rational(0));
              for (std::size_t j = 0; j < row.size(); ++j) s = s + ExactReal(row[j]) * x[j];
              out.push_back(s);
            }
            return out;
          }};
}

}  // namespace stabilis
