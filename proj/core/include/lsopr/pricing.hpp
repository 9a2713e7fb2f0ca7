#pragma once

#include <optional>

#include "lsopr/domain.hpp"

namespace lsopr {

enum class PricingStatus { Optimal, Unbounded, Infeasible };

/// Result of maximizing <A~, X> over the domain set (equivalently its convex
/// hull). Optimal: X is a member of the domain attaining `value`. Unbounded:
/// `direction` is a unit-Frobenius recession direction of the hull with
/// <A~, direction> > 0. Infeasible only arises for branch-restricted pricing
/// whose branch set is empty.
struct PricingOutcome {
  PricingStatus status = PricingStatus::Optimal;
  Matrix x;
  double value = 0.0;
  std::optional<Matrix> direction;
};

/// Solution of the vector program behind the matrix pricing problem.
struct VectorPricing {
  PricingStatus status = PricingStatus::Optimal;
  Vector lambda;          // length n, supported on the first k coordinates
  double value = 0.0;
  int ray_coord = -1;     // unbounded: coordinate of the recession ray
  double ray_sign = 1.0;  // sign of the ray along that coordinate
  bool ray_paired = false;  // ray is e_first - e_last (trace-preserving pair)
};

/// Closed form for the lp-norm ball: maximize beta . lambda subject to
/// ||lambda||_ell <= c on a support of size k. `beta` must be sorted for the
/// space (descending for Psd/NonSym, by |beta| descending for Sym). For Psd
/// only the positive part of beta contributes; for Sym the solution carries
/// the signs of beta.
VectorPricing pricing_vector_lnorm(const Vector& beta, int k, double c, double ell,
                                   SpaceKind space);

/// Generic vector pricing: maximize beta . lambda over lambda >= 0 supported
/// on the first k coordinates with f(lambda) <= 0. Solved per kind by KKT
/// multiplier bisection; ball kinds go through a scalar normalization search.
VectorPricing pricing_vector_generic(const Vector& beta, int k, const SpectralFunction& f);

/// Branch-restricted vector pricing for symmetric-indefinite spectra:
/// maximize beta . lambda with lambda descending, zero block at positions
/// [s, s+n-cap-1], f(lambda) <= 0. beta sorted descending, length n.
VectorPricing pricing_branch_vector(const Vector& beta, int cap, int s,
                                    const SpectralFunction& f);

/// Matrix pricing over the domain set (Pricing Problem dispatch by space).
PricingOutcome pricing_matrix(const Matrix& a_tilde, const DomainSet& d);

/// Matrix pricing restricted to branch set s (symmetric indefinite spaces,
/// zero-block cap = ktilde).
PricingOutcome pricing_sym_indef(const Matrix& a_tilde, const DomainSet& d, int s);

}  // namespace lsopr
