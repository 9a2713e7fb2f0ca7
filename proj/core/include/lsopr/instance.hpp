#pragma once

#include <optional>
#include <vector>

#include "lsopr/domain.hpp"

namespace lsopr {

/// One two-sided linear row: bl <= <A, X> <= bu; absent sides are nullopt.
struct Constraint {
  Matrix a;
  std::optional<double> bl;
  std::optional<double> bu;
};

/// Extra scalar variable entering the rows linearly (e.g. the residual bound
/// of the matrix-completion driver). `row_coeffs` has one entry per row.
struct AuxVar {
  double obj = 0.0;
  Vector row_coeffs;
  double lb = 0.0;
};

struct Instance {
  Matrix a0;
  std::vector<Constraint> constraints;
  DomainSet domain;
  std::vector<AuxVar> aux_vars;
  std::optional<Matrix> planted;  // feasible start when the generator has one

  int num_rows() const { return static_cast<int>(constraints.size()); }

  Vector row_values(const Matrix& x) const {
    Vector v(num_rows());
    for (int i = 0; i < num_rows(); ++i) v(i) = frobenius_inner(constraints[i].a, x);
    return v;
  }

  /// Worst violation of the rows at (X, aux); zero when within bounds.
  double row_violation(const Matrix& x, const Vector& aux) const {
    double worst = 0.0;
    for (int i = 0; i < num_rows(); ++i) {
      double v = frobenius_inner(constraints[i].a, x);
      for (std::size_t j = 0; j < aux_vars.size(); ++j) {
        v += aux_vars[j].row_coeffs(i) * aux(static_cast<int>(j));
      }
      if (constraints[i].bl) worst = std::max(worst, *constraints[i].bl - v);
      if (constraints[i].bu) worst = std::max(worst, v - *constraints[i].bu);
    }
    return worst;
  }
};

}  // namespace lsopr
