#pragma once

#include <optional>
#include <vector>

#include "lsopr/common.hpp"

namespace lsopr {

/// Restricted master problem over pooled extreme points and directions:
///   min  sum_h alpha_h c_h + sum_j gamma_j c_j + sum_a c_a t_a
///   s.t. sum_h alpha_h = 1,
///        bl_i <= sum_h alpha_h a_ih + sum_j gamma_j a_ij + sum_a r_ia t_a <= bu_i,
///        alpha, gamma >= 0, t_a >= lb_a.
/// Absent bound sides are encoded as empty optionals, never as large numbers.
struct RmpModel {
  struct Entry {
    double obj = 0.0;
    Vector rows;  // length m
  };
  struct AuxVar {
    double obj = 0.0;
    Vector rows;
    double lb = 0.0;
  };
  std::vector<Entry> columns;
  std::vector<Entry> directions;
  std::vector<AuxVar> aux;
  std::vector<std::optional<double>> bl;
  std::vector<std::optional<double>> bu;

  int num_rows() const { return static_cast<int>(bl.size()); }
};

/// Duals of the master problem in the convention of the pricing step:
/// nu bounds the pooled columns' values of <A~, X_h> from above, and
/// mu_l, mu_u >= 0 are the row multipliers entering A~.
struct DualSolution {
  double nu = 0.0;
  Vector mu_l;
  Vector mu_u;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct RmpResult {
  LpStatus status = LpStatus::Optimal;
  Vector alpha;
  Vector gamma;
  Vector aux_values;
  double objective = 0.0;
  DualSolution duals;
  Vector aux_reduced_costs;
};

struct LpOptions {
  double feas_tol = Tolerances::lp_feasibility;
  double opt_tol = Tolerances::lp_optimality;
  int max_pivots = 20000;
};

RmpResult solve_rmp(const RmpModel& model, const LpOptions& options = {});

}  // namespace lsopr
