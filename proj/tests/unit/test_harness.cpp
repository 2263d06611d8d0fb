#include "stabilis/harness.hpp"
#include "stabilis/rng.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

using namespace stabilis;

namespace {

bool same(const std::vector<LopRecord>& a, const std::vector<LopRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].input_id != b[i].input_id || a[i].parameter != b[i].parameter ||
        a[i].rel_lop != b[i].rel_lop || a[i].abs_lop != b[i].abs_lop ||
        a[i].kappa_tilde != b[i].kappa_tilde) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("index loops") {
  std::atomic<int> sum{0};
  for_each_index(100, [&](std::size_t i) { sum += static_cast<int>(i); }, Execution::parallel);
  CHECK(sum == 4950);
  auto thrower = [](std::size_t i) {
    if (i == 7 || i == 40) throw std::runtime_error(std::to_string(i));
  };
  for (auto ex : {Execution::serial, Execution::parallel}) {
    try {
      for_each_index(64, thrower, ex);
      FAIL("no exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "7");
    }
  }
  CHECK(parallel_threads() >= 1);
}

TEST_CASE("statistics helpers") {
  const auto g = log_grid(1e-8, 1e-2, 7);
  REQUIRE(g.size() == 7);
  CHECK(g.front() == 1e-8);
  CHECK(g.back() == 1e-2);
  CHECK(std::abs(g[3] / 1e-5 - 1) < 1e-12);
  CHECK_THROWS_AS(log_grid(0, 1, 3), InvalidArgument);

  const std::vector<double> v{5, 1, 4, 2, 3};
  CHECK(nearest_rank(v, 0.5) == 3);
  CHECK(nearest_rank(v, 0.05) == 1);
  CHECK(nearest_rank(v, 1.0) == 5);
  CHECK(nearest_rank({1, 2, 3, 4}, 0.5) == 2);

  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 1e9}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  // Ties: ranks (1.5, 1.5, 3) against (1, 2, 3).
  CHECK(spearman({1, 1, 2}, {1, 2, 3}) == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(loglog_slope({1, 10, 100}, {1, 0.1, 0.01}) == doctest::Approx(-1.0));
}

TEST_CASE("perturbed inputs stay near the near-identity pair") {
  const double eps = 1e-4;
  const FpVector in = strassen_perturbed_input(eps, 9, 3, 53);
  REQUIRE(in.size() == 8);
  const double base[4] = {1, eps, eps, 1};
  for (int i = 0; i < 8; ++i) {
    const double r = in[i].to_double() / base[i % 4];
    CHECK(r > std::exp(-0.5) * (1 - 1e-15));
    CHECK(r < std::exp(0.5) * (1 + 1e-15));
  }
  const FpVector again = strassen_perturbed_input(eps, 9, 3, 53);
  for (int i = 0; i < 8; ++i) CHECK(in[i].identical(again[i]));
}

TEST_CASE("strassen experiment is reproducible and execution independent") {
  StrassenConfig c;
  c.n_eps = 5;
  c.samples = 20;
  const auto serial = strassen_samples(c, Execution::serial);
  CHECK(same(serial, strassen_samples(c, Execution::serial)));
  CHECK(same(serial, strassen_samples(c, Execution::parallel)));
  const auto rows = strassen_percentiles(c, serial);
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    CHECK(r.rel_p05 <= r.rel_med);
    CHECK(r.rel_med <= r.rel_p95);
    CHECK(r.abs_med < 100);
  }
  CHECK(rows.front().rel_med > 1e3 * rows.back().rel_med);
}

TEST_CASE("sine experiment is execution independent") {
  SineConfig c;
  c.k_max = 30;
  const auto serial = sine_experiment(c, Execution::serial);
  CHECK(same(serial, sine_experiment(c, Execution::parallel)));
  CHECK(serial[29].rel_lop > 1e3 * serial[9].rel_lop);
  const ExactReal x = sine_input(3, 100);
  CHECK(x.radius() <= Rational(1, 2) / Rational(Integer(1) << 99));
}

TEST_CASE("forward stability of naive summation") {
  Rng rng(5);
  std::vector<ExactVector> inputs;
  for (int i = 0; i < 20; ++i) {
    ExactVector x;
    for (int j = 0; j < 8; ++j) x.emplace_back(to_rational(Real(rng.uniform() + 0.1)));
    inputs.push_back(x);
  }
  const auto alg = make_algorithm("naive-sum", 8);
  const auto v = forward_stability_check(alg, inputs, {24, 53}, 16);
  CHECK(v.pass);
  CHECK(v.fitted_a <= 16);
  CHECK(v.runs.size() == 40);
  const auto w = forward_stability_check(alg, inputs, {24, 53}, 16, Execution::parallel);
  CHECK(w.fitted_a == v.fitted_a);
}

TEST_CASE("backward witness for products") {
  Rng rng(11);
  const Precision p(24);
  for (int i = 0; i < 200; ++i) {
    std::vector<Rational> x;
    for (int j = 0; j < 6; ++j) x.push_back(to_rational(Real(rng.normal())));
    const Real d = backward_check_product(x, p);
    CHECK(d <= 4 * 6 * to_real(p.unit_roundoff()));
  }
  const std::vector<Rational> with_zero{Rational(1), Rational(0)};
  CHECK_THROWS_AS(backward_check_product(with_zero, p), InvalidArgument);
  const std::vector<Rational> one{Rational(1), Rational(3)};
  CHECK_THROWS_AS(backward_check_product(one, Precision(3)), InvalidArgument);
}
