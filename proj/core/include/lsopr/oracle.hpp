#pragma once

#include "lsopr/instance.hpp"

namespace lsopr {
namespace oracle {

/// Exact enumeration of the majorization definition's binary programs
/// (subset sums per cardinality). n <= 12.
bool brute_majorization(const Vector& x, const Vector& y, bool weak);

/// Adaptive grid reference for the vector pricing problem: maximize
/// beta . lambda over lambda >= 0 supported on the first k coordinates with
/// f(lambda) <= 0. Accuracy about 1e-4 on unit-scale data; k <= 3.
double brute_pricing(const Vector& beta, int k, const SpectralFunction& f);

/// Exact reference for diagonal-space instances: enumerate supports of size
/// <= k and sign patterns, then solve each restricted linear program by
/// vertex enumeration. Supports the polyhedral catalogue kinds (lp-ball with
/// ell in {1, inf}, spectral-norm ball, nuclear ball). n <= 12, k <= 4.
double brute_lsop_diag(const Instance& instance);

/// Rank-one grid reference: direction sampling over the unit sphere with a
/// closed-form scalar solve per direction. Exact-ish (1e-3) for n <= 3;
/// for 4 <= n <= 6 the sampled value is only an upper bound on the optimum.
double brute_rank1_grid(const Instance& instance, int min_samples = 100000);

}  // namespace oracle
}  // namespace lsopr
