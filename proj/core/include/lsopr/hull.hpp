#pragma once

#include <optional>

#include "lsopr/domain.hpp"

namespace lsopr {

/// Witness of convex-hull membership: an auxiliary vector x (descending) that
/// majorizes the spectrum under the space-appropriate pattern, together with
/// the smallest attainable f-value over all such vectors. Membership holds iff
/// f_value <= membership tolerance. `branch` is set for symmetric-indefinite
/// and diagonal non-sign-invariant spaces (zero block at [s, s+n-ktilde-1]).
struct HullCertificate {
  Vector x;
  std::optional<int> branch;
  double f_value = 0.0;
};

/// Smallest concave sequence H with H(i) >= bounds(i) for all i and pinned
/// endpoints H(0) = bounds(0), H(K) = bounds(K). Returned sampled at 0..K.
Vector least_concave_majorant(const Vector& bounds);

/// Minimizer of f over the majorization polytope of X's spectrum:
///   Psd          exact majorization, x >= 0, support ktilde
///   NonSym       weak majorization of singular values, x >= 0, support ktilde
///   Sym          sign-invariant f: as NonSym on |eigenvalues|;
///                otherwise per-branch exact majorization, best branch kept
///   Diag         as Sym with diagonal entries in place of eigenvalues
/// `forced_branch` restricts the branch search (1-based, in [1, ktilde+1]).
std::optional<HullCertificate> hull_certificate(const Matrix& x, const DomainSet& d,
                                                std::optional<int> forced_branch = std::nullopt);

/// Certificate for a given spectrum; used where the decomposition is already
/// available. `lambda` must be sorted descending.
std::optional<HullCertificate> spectrum_certificate(const Vector& lambda, const DomainSet& d,
                                                    std::optional<int> forced_branch = std::nullopt);

bool is_in_hull(const Matrix& x, const DomainSet& d,
                double f_tol = Tolerances::membership);

}  // namespace lsopr
