#pragma once

// Stability measurements and the two instability experiments. Runs are
// independent; results come back in parameter order whatever the execution.

#include "stabilis/algorithms.hpp"
#include "stabilis/relmetric.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace stabilis {

enum class Execution { serial, parallel };

/// Calls body(i) for i in [0, n). The parallel variant uses OpenMP; if any
/// call throws, the exception of the smallest index is rethrown after all
/// calls finished, as the serial variant would have thrown it first.
void for_each_index_serial(std::size_t n, const std::function<void(std::size_t)>& body);
void for_each_index_parallel(std::size_t n, const std::function<void(std::size_t)>& body);
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution ex);

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int parallel_threads();

struct LopRecord {
  std::string input_id;
  /// ε for the Strassen experiment, k for the sine experiment.
  double parameter = 0;
  int t = 53;
  double rel_lop = 0;
  double abs_lop = 0;
  double kappa_tilde = 1;

  /// u = 2^-t, exactly.
  Rational u() const;
  double u_double() const;
};

struct StabilityVerdict {
  std::string algorithm;
  /// max over in-scope runs of rel_dist / (kappa_tilde u).
  double fitted_a = 0;
  double threshold = 0;
  bool pass = false;
  std::vector<LopRecord> runs;
  /// Runs skipped because kappa_tilde is infinite or u > 1/(a kappa_tilde).
  std::size_t skipped = 0;
  /// Set when the algorithm failed on an in-scope input (e.g. division by zero).
  std::optional<std::string> failure;
};

/// Reference precision for exact_reference: 4t + 64 bits.
long reference_guard(int t);

/// Runs alg on every (input, t). In scope: kappa_tilde finite and
/// u <= 1 / (a kappa_tilde). Passes when every in-scope run satisfies
/// rel_dist(f̂^u(x), f(x)) <= a kappa_tilde u.
StabilityVerdict forward_stability_check(const NumericalAlgorithm& alg,
                                         const std::vector<ExactVector>& inputs,
                                         const std::vector<int>& precisions, double a,
                                         Execution ex = Execution::serial);

/// Relative distance from (y1, x2, ..., xk) to x, where y1 = f̂^u(x) / (x2...xk)
/// exactly and f̂^u is naive_product after rounding x. Needs u < 1/(4k) and
/// nonzero x_i.
Real backward_check_product(std::span<const Rational> x, Precision p);

struct StrassenConfig {
  double eps_min = 1e-8;
  double eps_max = 1e-2;
  std::size_t n_eps = 100;
  std::size_t samples = 200;
  std::uint64_t seed = 20240601;
  int t = 53;
};

struct PercentileRow {
  double epsilon = 0;
  double rel_p05 = 0;
  double rel_med = 0;
  double rel_p95 = 0;
  double abs_p05 = 0;
  double abs_med = 0;
  double abs_p95 = 0;
};

/// n points log-spaced from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Nearest-rank percentile (q in (0, 1]) of unsorted values.
double nearest_rank(std::vector<double> values, double q);

/// One perturbed pair for (ε, flat sample index): P_A, P_B standard normal
/// from Rng::stream(seed, index), A' = A_ε ⊛ exp(P_A / (2 ||P_A||_F)), same
/// for B, then rounded to t bits. Returns the 8 inputs (A' then B').
FpVector strassen_perturbed_input(double epsilon, std::uint64_t seed, std::uint64_t index, int t);

/// Strassen's algorithm at t bits on one perturbed pair against the exact
/// product of the same inputs.
LopRecord strassen_sample(double epsilon, std::uint64_t seed, std::uint64_t index, int t);

/// All samples, ε-major (sample index = eps_index * samples + s).
std::vector<LopRecord> strassen_samples(const StrassenConfig& c, Execution ex = Execution::serial);
std::vector<PercentileRow> strassen_percentiles(const StrassenConfig& c,
                                                const std::vector<LopRecord>& samples);
std::vector<PercentileRow> strassen_experiment(const StrassenConfig& c,
                                               Execution ex = Execution::serial);

struct SineConfig {
  int k_max = 100;
  int t = 53;
  long guard = 512;
  SineAlgorithm algorithm = SineAlgorithm::faithful;
};

/// Enclosure of π 2^k + 1 with radius <= 2^-bits.
ExactReal sine_input(long k, long bits);

/// For k = 1..k_max: X_k = π 2^k + 1, rounded to t bits, the working sine
/// against high_precision_sin(X_k) at `guard` bits; rel_lop = |log(ŝ / sin X_k)| / u.
std::vector<LopRecord> sine_experiment(const SineConfig& c, Execution ex = Execution::serial);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of log10(y) against log10(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace stabilis
