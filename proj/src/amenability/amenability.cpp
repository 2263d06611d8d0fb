#include "stabilis/amenability.hpp"

#include "stabilis/condition.hpp"
#include "stabilis/errors.hpp"
#include "stabilis/rng.hpp"

#include <cmath>

namespace stabilis {

namespace {

DomainFn catalog_domain(const CatalogFunction& f) {
  return [&f](const RelPoint& y) { return f.in_domain(y.coords()); };
}

KappaTildeFn catalog_kappa(const CatalogFunction& f) {
  return [&f](const RelPoint& y) { return kappa_closed_form(f, y).kappa_tilde; };
}

struct SampleOutcome {
  AmenabilityClause violated = AmenabilityClause::none;
  RelPoint y;
};

// x_i d(sum_kappa)/dx_i at z with sum(z) != 0.
std::vector<Real> sum_log_gradient(std::span<const Real> z) {
  Real s = 0;
  Real n2 = 0;
  for (const auto& v : z) {
    s += v;
    n2 += v * v;
  }
  if (s == 0) throw DomainError("sum condition number is infinite");
  std::vector<Real> g;
  if (n2 == 0) return std::vector<Real>(z.size(), Real(0));
  const Real n = sqrt(n2);
  const Real sgn = s > 0 ? 1 : -1;
  for (const auto& v : z) g.push_back(v * (v / (n * abs(s)) - n * sgn / (s * s)));
  return g;
}

// x_i d/dx_i of c sqrt(sum x^4) / sum x^2.
std::vector<Real> squared_norm_log_gradient(std::span<const Real> x, const Real& c) {
  Real a2 = 0;
  Real b = 0;
  for (const auto& v : x) {
    a2 += pow(v, 4);
    b += v * v;
  }
  if (b == 0) return std::vector<Real>(x.size(), Real(0));
  const Real a = sqrt(a2);
  std::vector<Real> g;
  for (const auto& v : x) g.push_back(c * v * (2 * pow(v, 3) / (a * b) - 2 * a * v / (b * b)));
  return g;
}

}  // namespace

AmenabilityVerdict amenability_probe(const DomainFn& in_domain, const KappaTildeFn& kt,
                                     const RelPoint& x, double a, std::size_t n,
                                     std::uint64_t seed, Execution ex) {
  if (!(a > 0)) throw InvalidArgument("amenability constant must be positive");
  AmenabilityVerdict v;
  v.a_candidate = a;
  v.kt_center = kt(x);
  if (is_infinite(v.kt_center)) throw InvalidArgument("condition number is infinite at the center");
  v.radius = 1 / (Real(a) * v.kt_center);
  const Real bound = Real(a) * v.kt_center;

  const std::vector<RelPoint> inner = rel_ball_sample(x, v.radius, n, seed);
  const std::uint64_t sphere_seed = stream_seed(seed, 0x5eedULL);
  std::vector<SampleOutcome> out(n);
  for_each_index(
      n,
      [&](std::size_t i) {
        RelPoint y = i % 2 == 0 ? rel_sphere_point(x, v.radius, sphere_seed, i) : inner[i];
        if (!in_domain(y)) {
          out[i] = {AmenabilityClause::domain, std::move(y)};
          return;
        }
        Real k;
        try {
          k = kt(y);
        } catch (const DomainError&) {
          out[i] = {AmenabilityClause::domain, std::move(y)};
          return;
        }
        if (k > bound) out[i] = {AmenabilityClause::growth, std::move(y)};
      },
      ex);
  v.samples_used = n;
  for (auto& o : out) {
    if (o.violated == AmenabilityClause::domain) v.A1_ok = false;
    if (o.violated == AmenabilityClause::growth) v.A2_ok = false;
    if (o.violated != AmenabilityClause::none && !v.witness) {
      v.witness = std::move(o.y);
      v.violated = o.violated;
    }
  }
  return v;
}

AmenabilityVerdict amenability_probe(const CatalogFunction& f, const RelPoint& x, double a,
                                     std::size_t n, std::uint64_t seed, Execution ex) {
  if (x.dim() != f.input_dim()) throw DimensionMismatch("point does not match the function");
  return amenability_probe(catalog_domain(f), catalog_kappa(f), x, a, n, seed, ex);
}

bool recheck_witness(const DomainFn& in_domain, const KappaTildeFn& kt, const RelPoint& x,
                     const AmenabilityVerdict& v) {
  if (!v.witness) return false;
  const RelPoint& y = *v.witness;
  const ExtDist d = rel_dist(x, y);
  // The sphere samples sit at the radius up to rounding of exp and log.
  if (d.is_infinite() || d.value() > v.radius * (1 + Real("1e-30"))) return false;
  const Real kx = kt(x);
  switch (v.violated) {
    case AmenabilityClause::domain:
      if (!in_domain(y)) return true;
      try {
        kt(y);
      } catch (const DomainError&) {
        return true;
      }
      return false;
    case AmenabilityClause::growth:
      return in_domain(y) && kt(y) > Real(v.a_candidate) * kx;
    case AmenabilityClause::none:
      break;
  }
  return false;
}

bool recheck_witness(const CatalogFunction& f, const RelPoint& x, const AmenabilityVerdict& v) {
  return recheck_witness(catalog_domain(f), catalog_kappa(f), x, v);
}

std::vector<AmenabilityVerdict> amenability_sweep(const CatalogFunction& f, const RelPoint& x,
                                                  double a_max, std::size_t n,
                                                  std::uint64_t seed) {
  std::vector<AmenabilityVerdict> out;
  for (double a = 2; a <= a_max; a *= 2) out.push_back(amenability_probe(f, x, a, n, seed));
  return out;
}

std::optional<double> smallest_passing(const std::vector<AmenabilityVerdict>& sweep) {
  for (const auto& v : sweep) {
    if (v.ok()) return v.a_candidate;
  }
  return std::nullopt;
}

std::vector<Real> kappa_log_gradient(const CatalogFunction& f, const RelPoint& x) {
  if (x.dim() != f.input_dim()) throw DimensionMismatch("point does not match the function");
  if (!f.in_domain(x.coords())) throw DomainError("point outside the domain");
  const auto& c = x.coords();
  const std::vector<Real> zero(c.size(), Real(0));
  switch (f.kind()) {
    case FunctionKind::identity:
    case FunctionKind::product:
    case FunctionKind::copy:
    case FunctionKind::hadamard:
    case FunctionKind::tensor:
    case FunctionKind::power:
    case FunctionKind::sqrt:
      return zero;
    case FunctionKind::sum:
      return sum_log_gradient(c);
    case FunctionKind::inner_product: {
      const std::size_t k = c.size() / 2;
      std::vector<Real> z(k);
      for (std::size_t i = 0; i < k; ++i) z[i] = c[i] * c[k + i];
      const auto gz = sum_log_gradient(z);
      std::vector<Real> g(c.size());
      for (std::size_t i = 0; i < k; ++i) g[i] = g[k + i] = sqrt(Real(2)) * gz[i];
      return g;
    }
    case FunctionKind::squared_norm:
      return squared_norm_log_gradient(c, 2);
    case FunctionKind::norm2:
      return squared_norm_log_gradient(c, 1);
    case FunctionKind::sin: {
      const Real& v = c[0];
      const Real s = boost::multiprecision::sin(v);
      if (s == 0) throw DomainError("sine condition number is infinite");
      const Real cot = boost::multiprecision::cos(v) / s;
      const Real k = v * cot;
      const Real dk = cot - v / (s * s);
      return {v * (k < 0 ? -dk : dk)};
    }
    case FunctionKind::affine: {
      if (f.affine_op() != AffineOp::add && f.affine_op() != AffineOp::sub) return zero;
      const Real alpha = to_real(f.affine_op() == AffineOp::add ? f.alpha() : Rational(-f.alpha()));
      const Real den = c[0] + alpha;
      if (den == 0) throw DomainError("affine condition number is infinite");
      const Real q = c[0] / den;
      const Real dq = alpha / (den * den);
      return {c[0] * (q < 0 ? -dq : dq)};
    }
    default:
      break;
  }
  throw InvalidArgument("no smooth condition formula for " + f.name());
}

bool gradient_criterion(const CatalogFunction& f, const RelPoint& x, const Real& q) {
  const Real kt = kappa_closed_form(f, x).kappa_tilde;
  if (is_infinite(kt)) throw DomainError("condition number is infinite");
  Real n2 = 0;
  for (const auto& g : kappa_log_gradient(f, x)) n2 += g * g;
  return sqrt(n2) <= q * kt * kt;
}

ExcessFactorReport excess_factor(const CatalogFunction& g, const CatalogFunction& h,
                                 const RelPoint& x) {
  ExcessFactorReport r;
  r.kt_h_at_x = kappa_closed_form(h, x).kappa_tilde;
  r.kt_g_at_hx = kappa_closed_form(g, RelPoint(h.evaluate(x.coords()))).kappa_tilde;
  r.kt_f_at_x = kappa_composite(g, h, x).kappa_tilde;
  if (is_infinite(r.kt_f_at_x)) {
    r.undefined = true;
    r.excess = std::numeric_limits<Real>::quiet_NaN();
    return r;
  }
  r.excess = r.kt_g_at_hx * r.kt_h_at_x / r.kt_f_at_x;
  return r;
}

std::vector<Real> near_identity_pair(const Real& eps) { return {1, eps, eps, 1, 1, eps, eps, 1}; }

StrassenExcessClosedForm strassen_excess_closed_form(const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw InvalidArgument("need 0 < eps < 1");
  const Real e = to_real(eps);
  StrassenExcessClosedForm r;
  r.kappa_g12 = sqrt(pow(1 - e, 2) + pow(1 + e, 2)) / (2 * e);
  const Real diag = sqrt(1 + pow(e, 4)) / (1 + e * e);
  const Real off = 1 / sqrt(Real(2));
  r.kappa_entries = {diag, off, off, diag};
  r.lower_bound = 1 / (4 * eps);
  return r;
}

}  // namespace stabilis
