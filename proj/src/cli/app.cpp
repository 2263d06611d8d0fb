#include "stabilis/amenability.hpp"
#include "stabilis/cli.hpp"
#include "stabilis/condition.hpp"
#include "stabilis/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace stabilis::cli {

namespace {

using nlohmann::json;

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

std::string real_text(const Real& v, int digits = 17) {
  if (is_infinite(v)) return v > 0 ? "inf" : "-inf";
  return v.str(digits);
}

std::string point_text(const RelPoint& x, int digits) {
  std::string s;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (i) s += ',';
    s += real_text(x[i], digits);
  }
  return s;
}

json config_json(const RunConfig& c) {
  json j{{"command", c.command}, {"seed", c.seed}, {"t", c.t}, {"version", version()},
         {"execution", c.execution == Execution::serial ? "serial" : "parallel"}};
  if (c.command == "strassen") {
    j["eps_min"] = c.eps_min;
    j["eps_max"] = c.eps_max;
    j["n_eps"] = c.n_eps;
    j["samples"] = c.samples;
  } else if (c.command == "sine") {
    j["k_max"] = c.k_max;
    j["guard"] = c.guard;
    j["algorithm"] = c.sine_algorithm == SineAlgorithm::faithful ? "faithful" : "naive";
  }
  j["rerun"] = c.command_line();
  return j;
}

void write_header(std::ostream& os, const RunConfig& c) {
  os << "# stabilis " << version() << '\n';
  os << "# run: " << c.command_line() << '\n';
}

// Thrown for failures that are not about the configuration.
struct ComputeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
auto computing(const std::string& op, F&& f) {
  try {
    return f();
  } catch (const InvalidArgument&) {
    throw;
  } catch (const std::exception& e) {
    throw ComputeError(op + ": " + e.what());
  }
}

// Writes to the configured file, or to `out` when no path was given.
template <class F>
void emit(const RunConfig& c, std::ostream& out, F&& write) {
  if (c.output.empty()) {
    write(out);
    return;
  }
  std::ofstream f(c.output);
  if (!f) throw ComputeError("cannot open " + c.output + " for writing");
  write(f);
  if (!f) throw ComputeError("write to " + c.output + " failed");
}

void add_common(CLI::App* sub, RunConfig& c, bool tables) {
  sub->add_option("--seed", c.seed, "random seed")->envname("STABILIS_SEED");
  sub->add_option("-t,--precision", c.t, "mantissa bits");
  if (tables) {
    sub->add_option("--format", c.format, "csv or json")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv},
                                                {"json", OutputFormat::json}}));
    sub->add_option("-o,--output", c.output, "output file (default stdout)");
    sub->add_flag_callback("--serial", [&c] { c.execution = Execution::serial; },
                           "run the serial kernels");
  }
}

CatalogFunction function_at(const std::string& name, std::size_t dim, const std::string& param) {
  return CatalogFunction::from_name(name, dim, param);
}

}  // namespace

const char* version() { return STABILIS_VERSION; }

std::string format_number(double v) { return format_double(v); }

void RunConfig::validate() const {
  if (t < 3) throw InvalidArgument("precision must be at least 3 bits");
  if (command == "strassen") {
    if (!(eps_min > 0) || !(eps_max >= eps_min) || !std::isfinite(eps_max)) {
      throw InvalidArgument("need 0 < eps_min <= eps_max");
    }
    if (n_eps == 0 || samples == 0) throw InvalidArgument("need --n-eps >= 1 and --samples >= 1");
  }
  if (command == "sine") {
    if (k_max < 1) throw InvalidArgument("need --k-max >= 1");
    if (guard < 64) throw InvalidArgument("need --guard >= 64");
  }
}

std::string RunConfig::command_line() const {
  std::ostringstream s;
  s << command;
  if (command == "strassen") {
    s << " --eps " << format_number(eps_min) << ' ' << format_number(eps_max) << " --n-eps "
      << n_eps << " --samples " << samples;
  } else if (command == "sine") {
    s << " --k-max " << k_max << " --guard " << guard << " --algorithm "
      << (sine_algorithm == SineAlgorithm::faithful ? "faithful" : "naive");
  }
  s << " --seed " << seed << " -t " << t;
  return s.str();
}

StrassenConfig RunConfig::strassen() const {
  StrassenConfig s;
  s.eps_min = eps_min;
  s.eps_max = eps_max;
  s.n_eps = n_eps;
  s.samples = samples;
  s.seed = seed;
  s.t = t;
  return s;
}

SineConfig RunConfig::sine() const {
  SineConfig s;
  s.k_max = k_max;
  s.t = t;
  s.guard = guard;
  s.algorithm = sine_algorithm;
  return s;
}

void write_strassen(std::ostream& os, const RunConfig& c, const std::vector<PercentileRow>& rows) {
  if (c.format == OutputFormat::json) {
    json j{{"config", config_json(c)}, {"rows", json::array()}};
    for (const auto& r : rows) {
      j["rows"].push_back({{"epsilon", number_json(r.epsilon)},
                           {"rel_p05", number_json(r.rel_p05)},
                           {"rel_med", number_json(r.rel_med)},
                           {"rel_p95", number_json(r.rel_p95)},
                           {"abs_p05", number_json(r.abs_p05)},
                           {"abs_med", number_json(r.abs_med)},
                           {"abs_p95", number_json(r.abs_p95)}});
    }
    os << j.dump(1) << '\n';
    return;
  }
  write_header(os, c);
  os << "epsilon,rel_p05,rel_med,rel_p95,abs_p05,abs_med,abs_p95\n";
  for (const auto& r : rows) {
    os << format_number(r.epsilon) << ',' << format_number(r.rel_p05) << ','
       << format_number(r.rel_med) << ',' << format_number(r.rel_p95) << ','
       << format_number(r.abs_p05) << ',' << format_number(r.abs_med) << ','
       << format_number(r.abs_p95) << '\n';
  }
}

void write_sine(std::ostream& os, const RunConfig& c, const std::vector<LopRecord>& rows) {
  if (c.format == OutputFormat::json) {
    json j{{"config", config_json(c)}, {"rows", json::array()}};
    for (const auto& r : rows) {
      j["rows"].push_back({{"k", static_cast<long>(r.parameter)},
                           {"u", number_json(r.u_double())},
                           {"u_exact", "1*2^" + std::to_string(-r.t)},
                           {"rel_lop", number_json(r.rel_lop)}});
    }
    os << j.dump(1) << '\n';
    return;
  }
  write_header(os, c);
  os << "k,u,rel_lop\n";
  for (const auto& r : rows) {
    os << static_cast<long>(r.parameter) << ',' << format_number(r.u_double()) << ','
       << format_number(r.rel_lop) << '\n';
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-precision stability experiments and condition numbers", "stabilis"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  RunConfig strassen_cfg;
  strassen_cfg.command = "strassen";
  auto* strassen = app.add_subcommand("strassen", "Strassen vs near-identity 2x2 products");
  add_common(strassen, strassen_cfg, true);
  std::vector<double> eps_range;
  strassen->add_option("--eps", eps_range, "eps_min eps_max")->expected(2);
  strassen->add_option("--n-eps", strassen_cfg.n_eps, "grid points");
  strassen->add_option("--samples", strassen_cfg.samples, "perturbed pairs per grid point");
  strassen->add_flag_callback(
      "--full-grid",
      [&strassen_cfg] {
        strassen_cfg.n_eps = 1000;
        strassen_cfg.samples = 1000;
      },
      "1000 grid points x 1000 samples");

  RunConfig sine_cfg;
  sine_cfg.command = "sine";
  auto* sine = app.add_subcommand("sine", "sin(pi 2^k + 1) for k = 1..k_max");
  add_common(sine, sine_cfg, true);
  sine->add_option("--k-max", sine_cfg.k_max, "largest k");
  sine->add_option("--guard", sine_cfg.guard, "reference bits");
  sine->add_option("--algorithm", sine_cfg.sine_algorithm, "faithful or naive")
      ->transform(CLI::CheckedTransformer(std::map<std::string, SineAlgorithm>{
          {"faithful", SineAlgorithm::faithful}, {"naive", SineAlgorithm::naive}}));

  RunConfig cond_cfg;
  cond_cfg.command = "cond";
  auto* cond = app.add_subcommand("cond", "condition number of a catalog function");
  std::string cond_fn;
  std::string cond_x;
  std::string cond_param;
  bool cond_sample = false;
  bool cond_jacobian = false;
  std::size_t n_dirs = SamplingOptions{}.n_dirs;
  cond->add_option("function", cond_fn)->required();
  cond->add_option("point", cond_x, "comma-separated expressions")->required();
  cond->add_option("--param", cond_param, "function parameter");
  cond->add_flag("--sample", cond_sample, "sampled estimate");
  cond->add_flag("--jacobian", cond_jacobian, "relative Jacobian route");
  cond->add_option("--n-dirs", n_dirs, "random directions for --sample");
  cond->add_option("--seed", cond_cfg.seed)->envname("STABILIS_SEED");

  RunConfig amen_cfg;
  amen_cfg.command = "amen";
  auto* amen = app.add_subcommand("amen", "sampled amenability check");
  std::string amen_fn;
  std::string amen_x;
  std::string amen_param;
  double amen_a = 8;
  std::size_t amen_n = 500;
  double sweep_max = 0;
  amen->add_option("function", amen_fn)->required();
  amen->add_option("--x", amen_x, "center point")->required();
  amen->add_option("--a", amen_a, "amenability constant");
  amen->add_option("--n", amen_n, "samples");
  amen->add_option("--sweep", sweep_max, "probe a = 2, 4, ... up to this value instead");
  amen->add_option("--param", amen_param, "function parameter");
  amen->add_option("--seed", amen_cfg.seed)->envname("STABILIS_SEED");

  auto* excess = app.add_subcommand("excess", "numerical excess factor of g after h");
  std::string g_name;
  std::string h_name;
  std::string ex_x;
  std::string ex_eps;
  std::string g_param;
  std::string h_param;
  excess->add_option("outer", g_name, "g")->required();
  excess->add_option("inner", h_name, "h")->required();
  auto* x_opt = excess->add_option("--x", ex_x, "point");
  excess->add_option("--eps", ex_eps, "use the near-identity pair (A_eps, B_eps)")->excludes(x_opt);
  excess->add_option("--param-g", g_param);
  excess->add_option("--param-h", h_param);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (strassen->parsed()) {
      if (!eps_range.empty()) {
        strassen_cfg.eps_min = eps_range[0];
        strassen_cfg.eps_max = eps_range[1];
      }
      strassen_cfg.validate();
      const auto rows = computing("strassen experiment", [&] {
        return strassen_experiment(strassen_cfg.strassen(), strassen_cfg.execution);
      });
      emit(strassen_cfg, out, [&](std::ostream& os) { write_strassen(os, strassen_cfg, rows); });
    } else if (sine->parsed()) {
      sine_cfg.validate();
      const auto rows = computing("sine experiment",
                                  [&] { return sine_experiment(sine_cfg.sine(), sine_cfg.execution); });
      emit(sine_cfg, out, [&](std::ostream& os) { write_sine(os, sine_cfg, rows); });
    } else if (cond->parsed()) {
      const RelPoint x(parse_point(cond_x));
      const CatalogFunction f = function_at(cond_fn, x.dim(), cond_param);
      if (!f.in_domain(x.coords())) throw InvalidArgument("point outside the domain of " + f.name());
      ConditionReport r = computing("condition number", [&] {
        if (cond_sample) {
          SamplingOptions opt;
          opt.n_dirs = n_dirs;
          opt.seed = cond_cfg.seed;
          return kappa_sampled(f, x, opt);
        }
        return cond_jacobian ? kappa_jacobian(f, x) : kappa_closed_form(f, x);
      });
      out << "function: " << f.name() << '\n';
      out << "point: " << point_text(x, 17) << '\n';
      out << "kappa: " << real_text(r.kappa) << '\n';
      out << "kappa_tilde: " << real_text(r.kappa_tilde) << '\n';
      out << "method: " << to_string(r.method) << '\n';
      if (cond_sample) {
        out << "converged: " << (r.converged ? "yes" : "no") << '\n';
        out << "divergent: " << (r.divergent ? "yes" : "no") << '\n';
        out << "levels:";
        for (const auto& l : r.level_estimates) out << ' ' << real_text(l);
        out << '\n';
      }
    } else if (amen->parsed()) {
      const RelPoint x(parse_point(amen_x));
      const CatalogFunction f = function_at(amen_fn, x.dim(), amen_param);
      if (!f.in_domain(x.coords())) throw InvalidArgument("point outside the domain of " + f.name());
      if (is_infinite(kappa_closed_form(f, x).kappa)) {
        throw InvalidArgument("condition number is infinite at the center");
      }
      std::vector<AmenabilityVerdict> verdicts;
      computing("amenability probe", [&] {
        if (sweep_max > 0) {
          verdicts = amenability_sweep(f, x, sweep_max, amen_n, amen_cfg.seed);
        } else {
          verdicts.push_back(amenability_probe(f, x, amen_a, amen_n, amen_cfg.seed));
        }
        return 0;
      });
      out << "function: " << f.name() << '\n';
      out << "point: " << point_text(x, 17) << '\n';
      out << "seed: " << amen_cfg.seed << '\n';
      for (const auto& v : verdicts) {
        out << "a: " << format_number(v.a_candidate) << '\n';
        out << "radius: " << real_text(v.radius) << '\n';
        out << "samples: " << v.samples_used << '\n';
        out << "A1: " << (v.A1_ok ? "ok" : "violated") << '\n';
        out << "A2: " << (v.A2_ok ? "ok" : "violated") << '\n';
        out << "verdict: " << (v.ok() ? "PASS" : "FAIL") << '\n';
        if (v.witness) {
          out << "witness: " << point_text(*v.witness, 45) << '\n';
          if (v.violated == AmenabilityClause::growth) {
            out << "witness_kappa_tilde: "
                << real_text(kappa_closed_form(f, *v.witness).kappa_tilde) << '\n';
          }
          out << "witness_recheck: " << (recheck_witness(f, x, v) ? "ok" : "failed") << '\n';
        }
      }
      if (sweep_max > 0) {
        const auto a = smallest_passing(verdicts);
        out << "smallest_passing_a: " << (a ? format_number(*a) : "none") << '\n';
      }
    } else if (excess->parsed()) {
      if (ex_x.empty() == ex_eps.empty()) throw InvalidArgument("give exactly one of --x and --eps");
      Rational eps;
      std::vector<Real> pt;
      if (!ex_eps.empty()) {
        eps = parse_rational(ex_eps);
        if (eps <= 0 || eps >= 1) throw InvalidArgument("need 0 < eps < 1");
        pt = near_identity_pair(to_real(eps));
      } else {
        pt = parse_point(ex_x);
      }
      const RelPoint x(pt);
      const CatalogFunction h = function_at(h_name, x.dim(), h_param);
      const CatalogFunction g = function_at(g_name, h.output_dim(), g_param);
      const auto r = computing("excess factor", [&] { return excess_factor(g, h, x); });
      out << "g: " << g.name() << '\n';
      out << "h: " << h.name() << '\n';
      out << "point: " << point_text(x, 17) << '\n';
      out << "kt_g_at_hx: " << real_text(r.kt_g_at_hx) << '\n';
      out << "kt_h_at_x: " << real_text(r.kt_h_at_x) << '\n';
      out << "kt_f_at_x: " << real_text(r.kt_f_at_x) << '\n';
      out << "excess: " << (r.undefined ? std::string("undefined") : real_text(r.excess)) << '\n';
      if (!ex_eps.empty() && g.kind() == FunctionKind::strassen_g &&
          h.kind() == FunctionKind::strassen_h) {
        const auto cf = strassen_excess_closed_form(eps);
        out << "kappa_g12: " << real_text(cf.kappa_g12) << '\n';
        out << "lower_bound: " << cf.lower_bound.get_str() << '\n';
      }
    }
  } catch (const ComputeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompute;
  } catch (const InvalidArgument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionMismatch& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::logic_error& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompute;
  }
  return kExitOk;
}

}  // namespace stabilis::cli
