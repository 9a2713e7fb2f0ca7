#pragma once

#include "lsopr/colgen.hpp"

namespace lsopr {

struct ReduceOptions {
  double rank_tol = Tolerances::rank;
  double row_tol = Tolerances::row_feasibility;
  int max_iterations = 0;  // 0 -> 50 n
};

/// State of one reduction pass over a hull-feasible point.
struct ReductionState {
  Matrix x;
  HullCertificate certificate;
  Vector spectrum;  // domain ordering, descending
  int rank = 0;
};

/// Null-space movement direction for the current state: orthogonal to every
/// constraint row and trace-free on its spectral blocks, oriented so the
/// objective does not increase. Returns nullopt when the constraints span.
std::optional<Matrix> build_direction(const ReductionState& state, const Instance& instance,
                                      double rank_tol = Tolerances::rank);

/// Largest step delta >= 0 keeping X + delta * Y inside the certificate's
/// majorization region and the perturbed spectral blocks sign-definite.
double max_step(const ReductionState& state, const Matrix& y, const Instance& instance);

/// Walks an eps-optimal hull point to an extreme point: the output objective
/// never exceeds the input's, all rows are preserved exactly, and the final
/// rank satisfies the space's theoretical bound.
Solution reduce_rank(const Solution& solution, const Instance& instance,
                     const ReduceOptions& options = {});

}  // namespace lsopr
