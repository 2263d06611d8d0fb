#include "stabilis/condition.hpp"

#include "stabilis/errors.hpp"
#include "stabilis/rng.hpp"

#include <algorithm>

namespace stabilis {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::cos;
using boost::multiprecision::sin;
using boost::multiprecision::sqrt;

Real norm(std::span<const Real> v) {
  Real s = 0;
  for (const auto& c : v) s += c * c;
  return sqrt(s);
}

Real total(std::span<const Real> v) {
  Real s = 0;
  for (const auto& c : v) s += c;
  return s;
}

bool all_zero(std::span<const Real> v) {
  return std::all_of(v.begin(), v.end(), [](const Real& c) { return c == 0; });
}

std::size_t count_nonzero(std::span<const Real> v) {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](const Real& c) { return c != 0; }));
}

// ||z||_2 / |Σ z| with the conventions 0 for z = 0 and ∞ for Σ z = 0 ≠ z.
Real sum_kappa(std::span<const Real> z) {
  if (all_zero(z)) return 0;
  const Real s = total(z);
  if (s == 0) return real_infinity();
  return norm(z) / abs(s);
}

// ||x ⊛ x||_2 / ||x||_2^2, 0 at x = 0.
Real norm_ratio(std::span<const Real> x) {
  Real n2 = 0;
  Real n4 = 0;
  for (const auto& c : x) {
    n2 += c * c;
    n4 += c * c * c * c;
  }
  if (n2 == 0) return 0;
  return sqrt(n4) / n2;
}

std::vector<Real> hadamard_of(std::span<const Real> xy) {
  const std::size_t k = xy.size() / 2;
  std::vector<Real> z(k);
  for (std::size_t i = 0; i < k; ++i) z[i] = xy[i] * xy[k + i];
  return z;
}

}  // namespace

std::string to_string(KappaMethod m) {
  switch (m) {
    case KappaMethod::closed_form: return "closed_form";
    case KappaMethod::jacobian: return "jacobian";
    case KappaMethod::sampled: return "sampled";
  }
  return "?";
}

ConditionReport make_report(Real kappa, KappaMethod method, RelPoint at) {
  ConditionReport r;
  r.kappa_tilde = 1 + kappa;
  r.kappa = std::move(kappa);
  r.method = method;
  r.at = std::move(at);
  return r;
}

ConditionReport kappa_from_jacobian(const RelPoint& x, const RelPoint& fx, const Matrix& j) {
  const Matrix r = relative_jacobian(x.coords(), fx.coords(), j);
  return make_report(spectral_norm(r), KappaMethod::jacobian, x);
}

ConditionReport kappa_jacobian(const CatalogFunction& f, const RelPoint& x) {
  if (!f.in_domain(x.coords())) throw DomainError(f.name() + ": point outside the domain");
  if (f.ill_posed(x.coords())) return make_report(real_infinity(), KappaMethod::jacobian, x);
  const RelPoint fx(f.evaluate(x.coords()));
  return kappa_from_jacobian(x, fx, f.jacobian(x.coords()));
}

ConditionReport kappa_closed_form(const CatalogFunction& f, const RelPoint& x) {
  const auto& c = x.coords();
  if (!f.in_domain(c)) throw DomainError(f.name() + ": point outside the domain");
  auto closed = [&](Real k) { return make_report(std::move(k), KappaMethod::closed_form, x); };
  if (x.is_zero()) return closed(0);

  switch (f.kind()) {
    case FunctionKind::identity:
      return closed(1);
    case FunctionKind::product:
      return closed(count_nonzero(c) == c.size() ? sqrt(Real(c.size())) : Real(0));
    case FunctionKind::sum:
      return closed(sum_kappa(c));
    case FunctionKind::hadamard:
      return closed(all_zero(hadamard_of(c)) ? Real(0) : sqrt(Real(2)));
    case FunctionKind::tensor: {
      const std::span<const Real> xs(c.data(), f.k1());
      const std::span<const Real> ys(c.data() + f.k1(), c.size() - f.k1());
      const std::size_t i = count_nonzero(xs);
      const std::size_t j = count_nonzero(ys);
      return closed(i * j == 0 ? Real(0) : sqrt(Real(i + j)));
    }
    case FunctionKind::inner_product:
      return closed(sqrt(Real(2)) * sum_kappa(hadamard_of(c)));
    case FunctionKind::copy:
      return closed(sqrt(Real(2)));
    case FunctionKind::squared_norm:
      return closed(2 * norm_ratio(c));
    case FunctionKind::sqrt:
      return closed(Real(1) / 2);
    case FunctionKind::norm2:
      return closed(norm_ratio(c));
    case FunctionKind::power:
      return closed(Real(std::labs(f.exponent())));
    case FunctionKind::affine: {
      const Real a = to_real(f.alpha());
      switch (f.affine_op()) {
        case AffineOp::add:
        case AffineOp::sub: {
          const Real v = f.affine_op() == AffineOp::add ? c[0] + a : c[0] - a;
          return closed(v == 0 ? real_infinity() : Real(abs(c[0] / v)));
        }
        case AffineOp::mul:
        case AffineOp::rdiv:
          return closed(a == 0 ? Real(0) : Real(1));
        case AffineOp::div:
          return closed(1);
      }
      break;
    }
    case FunctionKind::sin: {
      const Real s = sin(c[0]);
      return closed(s == 0 ? real_infinity() : Real(abs(c[0] * cos(c[0]) / s)));
    }
    case FunctionKind::matmul_entry: {
      const int i = f.entry_row();
      const int j = f.entry_col();
      const std::vector<Real> z = {c[2 * i] * c[4 + j], c[2 * i + 1] * c[6 + j]};
      return closed(sqrt(Real(2)) * sum_kappa(z));
    }
    case FunctionKind::composite:
      return kappa_composite(f.outer(), f.inner(), x);
    case FunctionKind::linear_map:
    case FunctionKind::strassen_h:
    case FunctionKind::strassen_g:
    case FunctionKind::matmul_2x2:
      return kappa_jacobian(f, x);
  }
  throw InvalidArgument("no closed form for " + f.name());
}

ConditionReport kappa_composite(const CatalogFunction& g, const CatalogFunction& h,
                                const RelPoint& x) {
  const auto gk = g.kind();
  const auto hk = h.kind();
  if (gk == FunctionKind::sum && hk == FunctionKind::hadamard) {
    return kappa_closed_form(CatalogFunction::inner_product(h.output_dim()), x);
  }
  if (gk == FunctionKind::sqrt && hk == FunctionKind::squared_norm) {
    return kappa_closed_form(CatalogFunction::norm2(h.input_dim()), x);
  }
  if (gk == FunctionKind::squared_norm && hk == FunctionKind::copy) {
    // 2 ||x||^2 has the relative condition of ||x||^2.
    return kappa_closed_form(CatalogFunction::squared_norm(h.input_dim()), x);
  }
  if (gk == FunctionKind::strassen_g && hk == FunctionKind::strassen_h) {
    return kappa_closed_form(CatalogFunction::matmul_2x2(), x);
  }
  return kappa_jacobian(CatalogFunction::compose(g, h), x);
}

std::vector<Real> component_kappas(const CatalogFunction& f, const RelPoint& x) {
  const auto& c = x.coords();
  if (!f.in_domain(c)) throw DomainError(f.name() + ": point outside the domain");
  const auto bad = f.ill_posed_components(c);
  const auto fx = f.evaluate(c);
  const Matrix r = relative_jacobian(c, fx, f.jacobian(c));
  std::vector<Real> out(f.output_dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = bad[i] ? real_infinity() : row_norm(r, i);
  return out;
}

namespace {

struct LevelResult {
  Real sup;
  bool divergent = false;
};

// Unit direction with i.i.d. normal entries on chi, from its own stream.
std::vector<Real> random_unit(std::size_t dim, const std::vector<std::size_t>& chi,
                              std::uint64_t seed, std::uint64_t index) {
  Rng rng = Rng::stream(seed, index);
  std::vector<Real> v(dim);
  Real n2 = 0;
  while (n2 == 0) {
    n2 = 0;
    for (auto i : chi) {
      v[i] = Real(rng.normal());
      n2 += v[i] * v[i];
    }
  }
  const Real n = sqrt(n2);
  for (auto i : chi) v[i] /= n;
  return v;
}

std::vector<Real> probe(const Evaluator& f, const RelPoint& x, const std::vector<Real>& step) {
  const RelPoint y = rel_exp_map(x, step);
  try {
    return f(y.coords());
  } catch (const DomainError& e) {
    throw DomainError(std::string("sampled probe left the domain (boundary evidence): ") + e.what());
  }
}

LevelResult sample_level(const Evaluator& f, const RelPoint& x, const RelPoint& fx,
                         const Real& r, const SamplingOptions& opt) {
  const auto chi = x.pattern().support();
  const std::size_t d = x.dim();
  LevelResult out{Real(0)};

  auto consider = [&](const std::vector<Real>& unit) -> bool {
    std::vector<Real> step(d);
    for (std::size_t i = 0; i < d; ++i) step[i] = r * unit[i];
    const RelPoint fy(probe(f, x, step));
    const ExtDist dist = rel_dist(fx, fy);
    if (dist.is_infinite()) {
      out.sup = real_infinity();
      out.divergent = true;
      return false;
    }
    out.sup = std::max(out.sup, Real(dist.value() / r));
    return true;
  };

  // Coordinate probes double as the secant relative Jacobian.
  Matrix secant(fx.dim(), chi.size());
  for (std::size_t c = 0; c < chi.size(); ++c) {
    for (int s : {+1, -1}) {
      std::vector<Real> step(d);
      step[chi[c]] = s * r;
      const RelPoint fy(probe(f, x, step));
      const ExtDist dist = rel_dist(fx, fy);
      if (dist.is_infinite()) return {real_infinity(), true};
      out.sup = std::max(out.sup, Real(dist.value() / r));
      if (s > 0) {
        for (std::size_t i = 0; i < fx.dim(); ++i) {
          if (fx[i] != 0) secant(i, c) = log(fy[i] / fx[i]) / r;
        }
      }
    }
  }

  const TopSingular top = top_singular(secant);
  if (!top.right.empty()) {
    for (int s : {+1, -1}) {
      std::vector<Real> unit(d);
      for (std::size_t c = 0; c < chi.size(); ++c) unit[chi[c]] = s * top.right[c];
      if (!consider(unit)) return out;
    }
  }

  for (std::size_t k = 0; k < opt.n_dirs; ++k) {
    if (!consider(random_unit(d, chi, opt.seed, k))) return out;
  }
  return out;
}

}  // namespace

ConditionReport kappa_sampled(const Evaluator& f, const RelPoint& x, const SamplingOptions& opt) {
  if (opt.radii.empty()) throw InvalidArgument("empty radius schedule");
  for (std::size_t i = 0; i < opt.radii.size(); ++i) {
    if (opt.radii[i] <= 0 || (i > 0 && opt.radii[i] >= opt.radii[i - 1])) {
      throw InvalidArgument("radius schedule must be positive and decreasing");
    }
  }
  const RelPoint fx(f(x.coords()));
  ConditionReport rep = make_report(Real(0), KappaMethod::sampled, x);
  // The component of 0 is a single point, where f is trivially constant.
  if (x.is_zero()) return rep;

  Real best = 0;
  for (const auto& r : opt.radii) {
    const LevelResult level = sample_level(f, x, fx, r, opt);
    rep.level_estimates.push_back(level.sup);
    if (level.divergent) {
      rep = make_report(real_infinity(), KappaMethod::sampled, x);
      rep.divergent = true;
      rep.converged = false;
      return rep;
    }
    best = std::max(best, level.sup);
  }
  const auto& est = rep.level_estimates;
  Real kappa = est.back();
  bool converged = true;
  if (est.size() >= 2) {
    const Real& a = est[est.size() - 2];
    const Real& b = est.back();
    const Real scale = std::max(abs(a), abs(b));
    converged = scale == 0 || abs(a - b) <= scale / 100;
  }
  if (!converged) kappa = best;
  auto levels = std::move(rep.level_estimates);
  rep = make_report(kappa, KappaMethod::sampled, x);
  rep.level_estimates = std::move(levels);
  rep.converged = converged;
  return rep;
}

ConditionReport kappa_sampled(const CatalogFunction& f, const RelPoint& x,
                              const SamplingOptions& opt) {
  return kappa_sampled([&f](const std::vector<Real>& y) { return f.evaluate(y); }, x, opt);
}

Real composition_upper_bound(const Real& kt_g, const Real& kt_h) {
  if (kt_g < 1 || kt_h < 1) throw InvalidArgument("kappa-tilde values must be >= 1");
  return kt_g * kt_h;
}

StackingBounds stacking_bounds(std::span<const Real> kappas) {
  StackingBounds b{Real(0), Real(0)};
  Real s = 0;
  for (const auto& k : kappas) {
    if (k < 0) throw InvalidArgument("condition numbers must be >= 0");
    b.lower = std::max(b.lower, k);
    s += k * k;
  }
  b.upper = sqrt(s);
  return b;
}

}  // namespace stabilis
