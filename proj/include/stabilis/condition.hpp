#pragma once

// Condition numbers in the coordinatewise relative metric: catalog closed
// forms, the spectral norm of the relative Jacobian, and a black-box sampling
// estimator of the lim-sup definition.

#include "stabilis/catalog_function.hpp"
#include "stabilis/matrix.hpp"
#include "stabilis/relmetric.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace stabilis {

enum class KappaMethod { closed_form, jacobian, sampled };

std::string to_string(KappaMethod m);

struct ConditionReport {
  Real kappa;
  /// 1 + kappa.
  Real kappa_tilde;
  KappaMethod method = KappaMethod::closed_form;
  RelPoint at;
  /// Sampled estimates only: the last two radius levels agreed within 1%.
  bool converged = true;
  /// Sampled estimates only: some probe left the sign pattern of f(x).
  bool divergent = false;
  /// Sampled estimates only: per-radius sup estimates, in schedule order.
  std::vector<Real> level_estimates;

  bool is_infinite() const { return stabilis::is_infinite(kappa); }
};

ConditionReport make_report(Real kappa, KappaMethod method, RelPoint at);

/// kappa = || diag(fx)^+ J diag(x) ||_2. The caller asserts that f maps a
/// neighborhood of x into one component.
ConditionReport kappa_from_jacobian(const RelPoint& x, const RelPoint& fx, const Matrix& j);

/// Jacobian route for a catalog function: infinite on the analytic ill-posed
/// locus, otherwise kappa_from_jacobian with the hand-coded Jacobian.
ConditionReport kappa_jacobian(const CatalogFunction& f, const RelPoint& x);

/// Catalog formula. Functions without a scalar formula (general linear maps,
/// the Strassen maps, 2x2 products, unrecognized composites) fall back to the
/// Jacobian route and report method = jacobian. Throws DomainError outside
/// the domain.
ConditionReport kappa_closed_form(const CatalogFunction& f, const RelPoint& x);

/// Condition number of each output component on its own: row norms of the
/// relative Jacobian, infinite on ill-posed components.
std::vector<Real> component_kappas(const CatalogFunction& f, const RelPoint& x);

using Evaluator = std::function<std::vector<Real>(const std::vector<Real>&)>;

struct SamplingOptions {
  /// Decreasing radius schedule.
  std::vector<Real> radii = {Real("1e-6"), Real("1e-8"), Real("1e-10")};
  std::size_t n_dirs = 200;
  std::uint64_t seed = 1;
};

/// Estimates sup rel_dist(f(x), f(y)) / r over sampled y at distance r, per
/// radius. Probes: n_dirs random directions, the coordinate directions, and
/// the top right singular vector of the secant relative Jacobian. Accepts the
/// last level when the last two agree within 1%, otherwise reports the max as
/// non-converged. A probe whose image leaves the component of f(x) makes the
/// estimate infinite and divergent. An evaluator throwing DomainError at a
/// probe is reported as DomainError naming the probe.
ConditionReport kappa_sampled(const Evaluator& f, const RelPoint& x,
                              const SamplingOptions& options = {});

ConditionReport kappa_sampled(const CatalogFunction& f, const RelPoint& x,
                              const SamplingOptions& options = {});

/// kt_g * kt_h: upper bound for kappa_tilde of g∘h.
Real composition_upper_bound(const Real& kt_g, const Real& kt_h);

struct StackingBounds {
  Real lower;
  Real upper;
};

/// (max kappa_i, sqrt(sum kappa_i^2)).
StackingBounds stacking_bounds(std::span<const Real> kappas);

/// kappa of g∘h at x, using the catalog formula of the composite when the
/// pair is a known decomposition (Σ∘⊛, √∘‖·‖², g∘h of Strassen), the Jacobian
/// chain rule otherwise.
ConditionReport kappa_composite(const CatalogFunction& g, const CatalogFunction& h,
                                const RelPoint& x);

}  // namespace stabilis
