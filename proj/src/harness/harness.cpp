#include "stabilis/harness.hpp"

#include "stabilis/condition.hpp"
#include "stabilis/elementary.hpp"
#include "stabilis/errors.hpp"
#include "stabilis/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace stabilis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double to_double_or_inf(const Real& v) { return is_infinite(v) ? kInf : v.convert_to<double>(); }

Rational pow2(long k) {
  Rational q(1);
  if (k >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
  }
  return q;
}

struct RunOutcome {
  LopRecord record;
  bool in_scope = false;
  Real ratio = 0;
  std::string error;
};

}  // namespace

Rational LopRecord::u() const { return pow2(-t); }

double LopRecord::u_double() const { return std::ldexp(1.0, -t); }

long reference_guard(int t) { return 4L * t + 64; }

StabilityVerdict forward_stability_check(const NumericalAlgorithm& alg,
                                         const std::vector<ExactVector>& inputs,
                                         const std::vector<int>& precisions, double a,
                                         Execution ex) {
  if (a <= 0) throw InvalidArgument("stability constant must be positive");
  const std::size_t np = precisions.size();
  std::vector<RunOutcome> out(inputs.size() * np);

  for_each_index(
      out.size(),
      [&](std::size_t idx) {
        const ExactVector& x = inputs[idx / np];
        const Precision p(precisions[idx % np]);
        RunOutcome& r = out[idx];
        r.record.input_id = "x" + std::to_string(idx / np);
        r.record.parameter = static_cast<double>(idx / np);
        r.record.t = p.bits();
        const Real kt = kappa_closed_form(alg.problem, RelPoint::from_exact(x)).kappa_tilde;
        r.record.kappa_tilde = to_double_or_inf(kt);
        const Real u = to_real(p.unit_roundoff());
        r.in_scope = !is_infinite(kt) && Real(a) * kt * u <= 1;
        FpVector computed;
        try {
          computed = alg.run(x, p);
        } catch (const Error& e) {
          r.error = e.what();
          return;
        }
        const ExactVector ref = alg.exact_reference(x, reference_guard(p.bits()));
        const ExtDist d = rel_dist_exact(computed, ref);
        r.record.rel_lop = to_double_or_inf(d.value() / u);
        r.record.abs_lop = to_double_or_inf(abs_dist_exact(computed, ref) / u);
        if (!is_infinite(kt)) r.ratio = d.value() / (kt * u);
      },
      ex);

  StabilityVerdict v;
  v.algorithm = alg.id;
  v.threshold = a;
  Real fitted = 0;
  for (auto& r : out) {
    if (!r.in_scope) {
      ++v.skipped;
    } else if (!r.error.empty()) {
      if (!v.failure) {
        v.failure = r.record.input_id + " at t=" + std::to_string(r.record.t) + ": " + r.error;
      }
    } else {
      fitted = std::max(fitted, r.ratio);
    }
    v.runs.push_back(std::move(r.record));
  }
  v.fitted_a = to_double_or_inf(fitted);
  v.pass = !v.failure && fitted <= Real(a);
  return v;
}

Real backward_check_product(std::span<const Rational> x, Precision p) {
  const std::size_t k = x.size();
  if (k == 0) throw InvalidArgument("empty product");
  if (p.unit_roundoff() * static_cast<long>(4 * k) >= 1) {
    throw InvalidArgument("backward witness needs u < 1/(4k)");
  }
  FpVector rounded;
  for (const auto& v : x) {
    if (v == 0) throw InvalidArgument("backward witness needs nonzero inputs");
    rounded.push_back(round(v, p));
  }
  const FpNumber computed = naive_product(rounded, p);
  Rational rest(1);
  for (std::size_t i = 1; i < k; ++i) rest *= x[i];
  ExactVector witness{ExactReal(Rational(computed.to_rational() / rest))};
  ExactVector original{ExactReal(x[0])};
  for (std::size_t i = 1; i < k; ++i) {
    witness.emplace_back(x[i]);
    original.emplace_back(x[i]);
  }
  return rel_dist_exact(original, witness).value();
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi >= lo) || n == 0) throw InvalidArgument("invalid log grid");
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

double nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

FpVector strassen_perturbed_input(double epsilon, std::uint64_t seed, std::uint64_t index,
                                  int t) {
  Rng rng = Rng::stream(seed, index);
  const Real eps(epsilon);
  const Real base[4] = {Real(1), eps, eps, Real(1)};
  const Precision p(t);
  FpVector in;
  in.reserve(8);
  for (int m = 0; m < 2; ++m) {
    double pert[4];
    Real frob2 = 0;
    for (double& v : pert) {
      v = rng.normal();
      frob2 += Real(v) * v;
    }
    const Real scale = 2 * sqrt(frob2);
    for (int i = 0; i < 4; ++i) in.push_back(round(to_rational(base[i] * exp(pert[i] / scale)), p));
  }
  return in;
}

LopRecord strassen_sample(double epsilon, std::uint64_t seed, std::uint64_t index, int t) {
  const Precision p(t);
  const FpVector in = strassen_perturbed_input(epsilon, seed, index, t);
  ExactVector exact;
  for (const auto& v : in) exact.push_back(to_exact(v));
  const FpVector c = strassen_2x2(in, p);
  const ExactVector ref = exact_strassen_or_matmul(exact);
  const Real u = to_real(p.unit_roundoff());
  LopRecord r;
  r.input_id = std::to_string(index);
  r.parameter = epsilon;
  r.t = t;
  r.rel_lop = to_double_or_inf(rel_dist_exact(c, ref).value() / u);
  r.abs_lop = to_double_or_inf(abs_dist_exact(c, ref) / u);
  r.kappa_tilde = to_double_or_inf(
      kappa_closed_form(CatalogFunction::matmul_2x2(), RelPoint::from_fp(in)).kappa_tilde);
  return r;
}

std::vector<LopRecord> strassen_samples(const StrassenConfig& c, Execution ex) {
  const std::vector<double> grid = log_grid(c.eps_min, c.eps_max, c.n_eps);
  if (c.samples == 0) throw InvalidArgument("need at least one sample per epsilon");
  std::vector<LopRecord> out(grid.size() * c.samples);
  for_each_index(
      out.size(),
      [&](std::size_t i) { out[i] = strassen_sample(grid[i / c.samples], c.seed, i, c.t); }, ex);
  return out;
}

std::vector<PercentileRow> strassen_percentiles(const StrassenConfig& c,
                                                const std::vector<LopRecord>& samples) {
  const std::vector<double> grid = log_grid(c.eps_min, c.eps_max, c.n_eps);
  if (samples.size() != grid.size() * c.samples) {
    throw DimensionMismatch("sample count does not match the configuration");
  }
  std::vector<PercentileRow> rows;
  for (std::size_t e = 0; e < grid.size(); ++e) {
    std::vector<double> rel;
    std::vector<double> abs;
    for (std::size_t s = 0; s < c.samples; ++s) {
      rel.push_back(samples[e * c.samples + s].rel_lop);
      abs.push_back(samples[e * c.samples + s].abs_lop);
    }
    rows.push_back({grid[e], nearest_rank(rel, 0.05), nearest_rank(rel, 0.5),
                    nearest_rank(rel, 0.95), nearest_rank(abs, 0.05), nearest_rank(abs, 0.5),
                    nearest_rank(abs, 0.95)});
  }
  return rows;
}

std::vector<PercentileRow> strassen_experiment(const StrassenConfig& c, Execution ex) {
  return strassen_percentiles(c, strassen_samples(c, ex));
}

ExactReal sine_input(long k, long bits) {
  if (k < 0) throw InvalidArgument("k must be >= 0");
  const ExactReal pi = pi_enclosure(bits + k + 2);
  const Rational scale = pow2(k);
  return ExactReal::enclosure(pi.center() * scale + 1, pi.radius() * scale);
}

std::vector<LopRecord> sine_experiment(const SineConfig& c, Execution ex) {
  if (c.k_max < 1) throw InvalidArgument("k_max must be >= 1");
  if (c.guard < 64) throw InvalidArgument("guard must be at least 64 bits");
  const Precision p(c.t);
  std::vector<LopRecord> out(static_cast<std::size_t>(c.k_max));
  for_each_index(
      out.size(),
      [&](std::size_t i) {
        const long k = static_cast<long>(i) + 1;
        const FpNumber x = round_correctly([k](long bits) { return sine_input(k, bits); }, p);
        const FpNumber s = working_sin(x, p, c.algorithm);
        const ExactReal xk = sine_input(k, c.guard + 16);
        const ExactReal ref = high_precision_sin(xk, c.guard);
        const ExactReal cos_ref =
            high_precision_sin(xk + pi_enclosure(c.guard + 16) / ExactReal(2), c.guard);
        const Real u = to_real(p.unit_roundoff());
        LopRecord& r = out[i];
        r.input_id = "k" + std::to_string(k);
        r.parameter = static_cast<double>(k);
        r.t = c.t;
        const FpVector computed{s};
        const ExactVector reference{ref};
        r.rel_lop = to_double_or_inf(rel_dist_exact(computed, reference).value() / u);
        r.abs_lop = to_double_or_inf(abs_dist_exact(computed, reference) / u);
        r.kappa_tilde =
            to_double_or_inf(1 + abs(xk.to_real() * cos_ref.to_real() / ref.to_real()));
      },
      ex);
  return out;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman needs paired samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
      for (std::size_t m = i; m <= j; ++m) r[idx[m]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0;
  return sxy / std::sqrt(sxx * syy);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs paired samples");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log10(x[i]);
    my += std::log10(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log10(x[i]) - mx;
    sxy += dx * (std::log10(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace stabilis
