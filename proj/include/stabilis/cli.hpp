#pragma once

// Command-line front end. run_cli is the whole program minus main().

#include "stabilis/algorithms.hpp"
#include "stabilis/exact_real.hpp"
#include "stabilis/harness.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stabilis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCompute = 3;

/// Seed used when neither --seed nor STABILIS_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20240601;

const char* version();

/// Enclosure of an expression over rationals, decimals and `pi` with + - * /
/// ( ) and integer powers `^`, radius about 2^-bits relative. Throws
/// InvalidArgument on syntax errors.
ExactReal evaluate_expression(const std::string& text, long bits);

/// Comma-separated expressions, each evaluated to working precision.
std::vector<Real> parse_point(const std::string& text);

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command;
  std::uint64_t seed = kDefaultSeed;
  int t = 53;
  double eps_min = 1e-8;
  double eps_max = 1e-2;
  std::size_t n_eps = 100;
  std::size_t samples = 200;
  int k_max = 100;
  long guard = 512;
  SineAlgorithm sine_algorithm = SineAlgorithm::faithful;
  OutputFormat format = OutputFormat::csv;
  std::string output;
  Execution execution = Execution::parallel;

  /// Throws InvalidArgument.
  void validate() const;
  /// Arguments that rerun this configuration.
  std::string command_line() const;
  StrassenConfig strassen() const;
  SineConfig sine() const;
};

void write_strassen(std::ostream& os, const RunConfig& c, const std::vector<PercentileRow>& rows);
void write_sine(std::ostream& os, const RunConfig& c, const std::vector<LopRecord>& rows);

/// Shortest round-trip decimal, `inf`/`-inf`/`nan` for non-finite values.
std::string format_number(double v);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stabilis::cli
