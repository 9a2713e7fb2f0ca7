#pragma once

#include <cstdint>
#include <vector>

#include "lsopr/colgen.hpp"
#include "lsopr/rankreduce.hpp"

namespace lsopr {

/// Instance plus the planted feasible point used to generate it.
struct GeneratedInstance {
  Instance instance;
  Matrix planted;
};

/// Random trace/log-det instance on the semidefinite space: a planted unit
/// dyad X0 = x x^T / ||x||, slacks keeping it feasible, symmetrized normal
/// data matrices, and two-sided rows around <A_i, X0>.
GeneratedInstance gen_mimo(int n, int m, int k, std::uint64_t seed);

/// Trace-band rank-one instance with upper-bounded rows only.
GeneratedInstance gen_opf(int n, int m, std::uint64_t seed);

struct McObservation {
  int i = 0;
  int j = 0;
  double value = 0.0;
};

struct McData {
  int n = 0, p = 0, k = 0;
  double noise = 0.0;
  std::vector<McObservation> observations;
  Matrix truth;  // U V^T + noise Z
};

/// Low-rank factor model A = U V^T + noise Z with a uniformly sampled
/// observation set (without replacement).
McData gen_matrix_completion(int n, int p, int k, int num_obs, double noise,
                             std::uint64_t seed);

/// Inner relaxation at nuclear-norm level z: minimize the worst residual
/// over observed cells.
Instance mc_inner_instance(const McData& data, double z);

struct McResult {
  Matrix x;
  double z = 0.0;
  double residual = 0.0;
  int bisection_steps = 0;
  Solution reduced;
};

/// Nuclear-norm level search: shrink z while the best residual stays below
/// delta_lb, then rank-reduce the final solution.
McResult solve_matrix_completion(const McData& data, double delta_lb,
                                 const SolveOptions& options = {});

/// Worst-case extreme-point construction: spectral-norm-ball domain, the
/// equality rows pinning a scaled identity corner, and a planted point of
/// rank exactly the theoretical bound.
GeneratedInstance tightness_fixture(SpaceKind space, int k, int r, int n = 0);

/// Diagonal-space variant (k, m rows; planted rank k + m).
GeneratedInstance tightness_fixture_diag(int k, int m, int n = 0);

}  // namespace lsopr
