#pragma once

#include <string>
#include <vector>

#include "lsopr/instance.hpp"

namespace lsopr {

struct BoundReport {
  SpaceKind space = SpaceKind::Psd;
  bool sign_invariant = false;
  int k = 1;
  int ktilde = 1;
  int m = 0;
  int mtilde = 0;
  int bound = 1;
  bool exactness = false;
  std::string formula_id;
};

/// Number of linearly independent matrices in the stack (numeric rank of the
/// vectorized constraints, relative singular-value cutoff 1e-9).
int count_independent(const std::vector<Matrix>& constraints, double rel_tol = 1e-9);

/// Extreme-point rank bound for the partial convexification, selected by
/// matrix space, sign-invariance, and the diagonal carrier. Floor terms are
/// evaluated in integer arithmetic.
int rank_bound(SpaceKind space, bool sign_invariant, bool diag, int ktilde, int mtilde);

enum class AppKind { Kernel, FairPca, Qcqp, FairSvd, MatrixCompletion, SparseRidge };

struct AppParams {
  int k = 1;
  int m = 0;        // row count / covariance groups
  int mtilde = 0;   // independent rows
  int omega = 0;    // observed entries (matrix completion)
  int rank_a = 0;   // design-matrix rank (sparse ridge)
};

int app_bound(AppKind app, const AppParams& params);

/// Sufficient condition under which the relaxation attains the original
/// optimal value (given a finite value and a line-free feasible set, which
/// are not checked here).
bool exactness_holds(SpaceKind space, bool sign_invariant, bool diag, int k, int ktilde,
                     int mtilde);

BoundReport bound_report(SpaceKind space, bool sign_invariant, bool diag, int k, int ktilde,
                         int m, int mtilde);

BoundReport bound_report(const Instance& instance);

}  // namespace lsopr
