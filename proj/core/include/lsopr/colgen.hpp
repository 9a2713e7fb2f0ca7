#pragma once

#include <functional>
#include <vector>

#include "lsopr/hull.hpp"
#include "lsopr/instance.hpp"
#include "lsopr/master.hpp"
#include "lsopr/pricing.hpp"

namespace lsopr {

enum class SolveStatus { Optimal, Infeasible, IterationLimit, Unbounded };

struct Solution {
  SolveStatus status = SolveStatus::Optimal;
  Matrix x;
  double objective = 0.0;
  double dual_bound = 0.0;
  double gap = 0.0;
  int rank = 0;
  std::optional<HullCertificate> certificate;
  std::optional<int> branch;
  int iterations = 0;
  int columns_generated = 0;
  Vector aux_values;
  std::vector<double> objective_history;  // RMP objective per iteration
};

struct SolveOptions {
  double epsilon = 1e-4;
  int max_iterations = 0;  // 0 -> 10 m + 200
  double rank_tol = Tolerances::rank;
  double row_tol = Tolerances::row_feasibility;
};

/// Pool of generated extreme points / directions, reusable across solves
/// (the matrix-completion driver rescales and re-feeds it).
struct ColumnPool {
  std::vector<Matrix> points;
  std::vector<Matrix> directions;
};

/// Feasible starting columns: the planted point when the instance carries
/// one, a domain member when there are no rows, otherwise an elastic
/// phase-1 column generation minimizing total row violation. Empty result
/// means the instance is infeasible.
std::vector<Matrix> initial_columns(const Instance& instance, const SolveOptions& options = {});

/// Column generation on the partial convexification of the instance.
Solution solve_lsopr(const Instance& instance, const SolveOptions& options = {},
                     const ColumnPool* warm_start = nullptr,
                     ColumnPool* pool_out = nullptr);

/// Branch-union relaxation for symmetric-indefinite (and diagonal) spaces
/// with a non-sign-invariant spectral constraint: solves one restricted
/// relaxation per zero-block position and keeps the best branch.
Solution solve_lsopr_indef(const Instance& instance, const SolveOptions& options = {});

}  // namespace lsopr
