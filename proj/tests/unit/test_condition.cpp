#include "oracles.hpp"

#include "stabilis/condition.hpp"
#include "stabilis/rng.hpp"

#include <doctest.h>

using namespace stabilis;

namespace {

Real kappa(const CatalogFunction& f, std::initializer_list<double> x) {
  return kappa_closed_form(f, RelPoint(x)).kappa;
}

bool close(const Real& a, const Real& b, const Real& tol) {
  return abs(a - b) <= tol * (1 + abs(b));
}

}  // namespace

TEST_CASE("spectral norm") {
  Matrix id(3, 3);
  for (int i = 0; i < 3; ++i) id(i, i) = 1;
  CHECK(spectral_norm(id) == 1);
  Matrix m(2, 2);
  m(0, 1) = 2;
  CHECK(abs(spectral_norm(m) - 2) < Real("1e-40"));
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 1 + rng.uniform_int(0, 5);
    const std::size_t c = 1 + rng.uniform_int(0, 4);
    Matrix a(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) a(i, j) = Real(rng.normal());
    }
    CHECK(close(spectral_norm(a), oracle::spectral_norm_charpoly(a), Real("1e-12")));
  }
}

TEST_CASE("top singular vector is a unit maximizer") {
  Matrix a(3, 2);
  a(0, 0) = 3;
  a(1, 1) = 1;
  a(2, 0) = 4;
  const TopSingular top = top_singular(a);
  CHECK(abs(top.sigma - 5) < Real("1e-40"));
  CHECK(abs(abs(top.right[0]) - 1) < Real("1e-40"));
}

TEST_CASE("closed-form examples") {
  CHECK(close(kappa(CatalogFunction::product(3), {1, 2, 3}), sqrt(Real(3)), Real("1e-40")));
  CHECK(kappa(CatalogFunction::product(3), {1, 0, 3}) == 0);
  CHECK(close(kappa(CatalogFunction::sum(2), {1, 1}), sqrt(Real(2)) / 2, Real("1e-40")));
  CHECK(is_infinite(kappa(CatalogFunction::sum(2), {1, -1})));
  CHECK(kappa(CatalogFunction::sum(2), {0, 0}) == 0);
  CHECK(abs(kappa(CatalogFunction::power(2), {3})) == 2);
  CHECK(kappa(CatalogFunction::identity(1), {5}) == 1);
  const Real half_pi = boost::math::constants::half_pi<Real>();
  CHECK(kappa_closed_form(CatalogFunction::sin(), RelPoint(std::vector<Real>{half_pi})).kappa < Real("1e-40"));
  CHECK(close(kappa(CatalogFunction::copy(3), {1, 2, 3}), sqrt(Real(2)), Real("1e-40")));
  CHECK(kappa(CatalogFunction::sqrt(), {2}) == Real(1) / 2);
  CHECK_THROWS_AS(kappa(CatalogFunction::sqrt(), {-1}), DomainError);
}

TEST_CASE("Jacobian route") {
  const RelPoint x({3.0});
  const RelPoint fx({9.0});
  Matrix j(1, 1);
  j(0, 0) = 6;
  CHECK(abs(kappa_from_jacobian(x, fx, j).kappa - 2) < Real("1e-40"));
  const auto s = kappa_jacobian(CatalogFunction::sum(2), RelPoint({1.0, 1.0}));
  CHECK(close(s.kappa, sqrt(Real(2)) / 2, Real("1e-40")));
  CHECK(s.method == KappaMethod::jacobian);
}

TEST_CASE("sampled estimator") {
  SamplingOptions opt;
  opt.radii = {Real("1e-3"), Real("1e-4"), Real("1e-5")};
  opt.seed = 17;
  const auto p = kappa_sampled(CatalogFunction::product(3), RelPoint({1.0, 2.0, 3.0}), opt);
  CHECK(p.converged);
  CHECK(close(p.kappa, sqrt(Real(3)), Real("0.02")));

  const Evaluator constant = [](const std::vector<Real>&) { return std::vector<Real>{Real(7)}; };
  CHECK(kappa_sampled(constant, RelPoint({1.0, 2.0}), opt).kappa == 0);

  const auto s = kappa_sampled(CatalogFunction::sum(2), RelPoint({1.0, -1.0 + 1e-9}), opt);
  CHECK(s.kappa > Real("1e8"));
  CHECK(s.divergent);
}

TEST_CASE("composition and stacking helpers") {
  CHECK(composition_upper_bound(1, 1) == 1);
  CHECK_THROWS_AS(composition_upper_bound(Real("0.5"), 1), InvalidArgument);
  const std::vector<Real> k{3, 4};
  const auto b = stacking_bounds(k);
  CHECK(b.lower == 4);
  CHECK(b.upper == 5);
  const std::vector<Real> one{Real("2.5")};
  CHECK(stacking_bounds(one).lower == stacking_bounds(one).upper);

  // Σ∘⊛ at ((1,1),(1,1)).
  const RelPoint x({1.0, 1.0, 1.0, 1.0});
  const auto inner = kappa_composite(CatalogFunction::sum(2), CatalogFunction::hadamard(2), x);
  const auto kt_g = kappa_closed_form(CatalogFunction::sum(2), RelPoint({1.0, 1.0})).kappa_tilde;
  const auto kt_h = kappa_closed_form(CatalogFunction::hadamard(2), x).kappa_tilde;
  CHECK(composition_upper_bound(kt_g, kt_h) >= inner.kappa_tilde);
  CHECK(close(kt_g * kt_h, (1 + sqrt(Real(2)) / 2) * (1 + sqrt(Real(2))), Real("1e-40")));
}

TEST_CASE("matmul stacking around the near-identity pair") {
  const Real eps("0.01");
  const std::vector<Real> ab{1, eps, eps, 1, 1, eps, eps, 1};
  const RelPoint x(ab);
  const auto comps = component_kappas(CatalogFunction::matmul_2x2(), x);
  const Real diag = sqrt(Real(2)) * sqrt(1 + pow(eps, 4)) / (1 + eps * eps);
  CHECK(close(comps[0], diag, Real("1e-40")));
  CHECK(close(comps[1], Real(1), Real("1e-40")));
  const Real stacked = kappa_closed_form(CatalogFunction::matmul_2x2(), x).kappa;
  const auto b = stacking_bounds(comps);
  CHECK(b.lower <= stacked + Real("1e-40"));
  CHECK(stacked <= b.upper + Real("1e-40"));
}

TEST_CASE("strassen g12 condition at the near-identity pair") {
  const Real eps("0.01");
  const std::vector<Real> ab{1, eps, eps, 1, 1, eps, eps, 1};
  const auto hx = CatalogFunction::strassen_h().evaluate(ab);
  const auto g = component_kappas(CatalogFunction::strassen_g(), RelPoint(hx));
  const Real expected = sqrt(pow(1 - eps, 2) + pow(1 + eps, 2)) / (2 * eps);
  CHECK(close(g[1], expected, Real("1e-40")));
}
