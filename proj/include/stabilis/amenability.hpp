#pragma once

// Sampled amenability checks, the gradient criterion and the numerical
// excess factor of a decomposition f = g∘h.

#include "stabilis/catalog_function.hpp"
#include "stabilis/harness.hpp"
#include "stabilis/relmetric.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace stabilis {

/// kappa_tilde = 1 + kappa at a point; throws DomainError off the domain.
using KappaTildeFn = std::function<Real(const RelPoint&)>;
using DomainFn = std::function<bool(const RelPoint&)>;

enum class AmenabilityClause { none, domain, growth };

struct AmenabilityVerdict {
  double a_candidate = 0;
  bool A1_ok = true;
  bool A2_ok = true;
  std::optional<RelPoint> witness;
  AmenabilityClause violated = AmenabilityClause::none;
  std::size_t samples_used = 0;
  /// kappa_tilde at the probed center and the ball radius 1/(a kappa_tilde).
  Real kt_center = 1;
  Real radius = 0;

  bool ok() const { return A1_ok && A2_ok; }
};

/// Draws n points of the relative ball of radius 1/(a kappa_tilde(x)) around
/// x: even samples on the boundary sphere, odd ones inside. A.1 fails when a
/// sample leaves the domain, A.2 when kappa_tilde(y) > a kappa_tilde(x). The
/// witness is the violating sample of smallest index. Throws InvalidArgument
/// when kappa_tilde(x) is infinite or a <= 0.
AmenabilityVerdict amenability_probe(const DomainFn& in_domain, const KappaTildeFn& kt,
                                     const RelPoint& x, double a, std::size_t n,
                                     std::uint64_t seed, Execution ex = Execution::serial);
/// Same with the catalog domain and closed-form condition number.
AmenabilityVerdict amenability_probe(const CatalogFunction& f, const RelPoint& x, double a,
                                     std::size_t n, std::uint64_t seed,
                                     Execution ex = Execution::serial);

/// Re-evaluates a verdict's witness: true when it lies in the ball and
/// violates the recorded clause.
bool recheck_witness(const DomainFn& in_domain, const KappaTildeFn& kt, const RelPoint& x,
                     const AmenabilityVerdict& v);
bool recheck_witness(const CatalogFunction& f, const RelPoint& x, const AmenabilityVerdict& v);

/// Probes a = 2, 4, 8, ... up to a_max; one verdict per a.
std::vector<AmenabilityVerdict> amenability_sweep(const CatalogFunction& f, const RelPoint& x,
                                                  double a_max, std::size_t n,
                                                  std::uint64_t seed);
/// Smallest passing a of a sweep, if any.
std::optional<double> smallest_passing(const std::vector<AmenabilityVerdict>& sweep);

/// x_i dkappa/dx_i for catalog functions with a smooth formula (product,
/// sum, identity, copy, hadamard, tensor, power, sqrt, sin, affine,
/// inner_product, squared_norm, norm2). Throws InvalidArgument otherwise and
/// DomainError where kappa is infinite.
std::vector<Real> kappa_log_gradient(const CatalogFunction& f, const RelPoint& x);

/// ||(x_i dkappa/dx_i)_i|| <= q kappa_tilde(f, x)^2.
bool gradient_criterion(const CatalogFunction& f, const RelPoint& x, const Real& q);

struct ExcessFactorReport {
  Real kt_g_at_hx;
  Real kt_h_at_x;
  Real kt_f_at_x;
  Real excess;
  /// kt_f_at_x is infinite.
  bool undefined = false;
};

ExcessFactorReport excess_factor(const CatalogFunction& g, const CatalogFunction& h,
                                 const RelPoint& x);

struct StrassenExcessClosedForm {
  Real kappa_g12;
  /// Entries of the 2x2 product at (A_ε, B_ε), row-major.
  std::vector<Real> kappa_entries;
  /// 1/(4ε), exact.
  Rational lower_bound;
};

/// Closed forms at A_ε = B_ε = [[1, ε], [ε, 1]]; 0 < ε < 1.
StrassenExcessClosedForm strassen_excess_closed_form(const Rational& eps);

/// (A_ε, B_ε) flattened.
std::vector<Real> near_identity_pair(const Real& eps);

}  // namespace stabilis
