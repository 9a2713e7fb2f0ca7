#include "lsopr/master.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

namespace lsopr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense bounded-variable primal simplex.
//   min c.x  s.t.  A x = b,  lo <= x <= up
// Nonbasic variables rest at a finite bound; Bland's rule kicks in after a
// run of degenerate pivots.
struct BoundedSimplex {
  Matrix a;
  Vector b, c, lo, up;
  int m = 0, n = 0;
  std::vector<int> basis;
  std::vector<int> at_upper;  // 0 = at lower, 1 = at upper (nonbasic only)
  Vector x;
  LpOptions opt;

  bool is_basic(int j) const {
    return std::find(basis.begin(), basis.end(), j) != basis.end();
  }

  Vector solve_duals(const Eigen::PartialPivLU<Matrix>& lu_t, const Vector& cb) const {
    return lu_t.solve(cb);
  }

  // Returns Optimal or Unbounded; basis/x updated in place.
  LpStatus run() {
    int degenerate_run = 0;
    bool bland = false;
    for (int pivot = 0; pivot < opt.max_pivots; ++pivot) {
      Matrix bmat(m, m);
      for (int i = 0; i < m; ++i) bmat.col(i) = a.col(basis[i]);
      Eigen::PartialPivLU<Matrix> lu(bmat);
      Eigen::PartialPivLU<Matrix> lu_t(bmat.transpose());

      Vector rhs = b;
      for (int j = 0; j < n; ++j) {
        if (!is_basic(j)) rhs -= a.col(j) * x(j);
      }
      Vector xb = lu.solve(rhs);
      for (int i = 0; i < m; ++i) x(basis[i]) = xb(i);

      Vector cb(m);
      for (int i = 0; i < m; ++i) cb(i) = c(basis[i]);
      Vector y = solve_duals(lu_t, cb);

      // Entering variable. Fixed variables (lo == up) never enter.
      int enter = -1;
      double best_score = 0.0;
      bool enter_increase = true;
      for (int j = 0; j < n; ++j) {
        if (is_basic(j)) continue;
        if (up(j) - lo(j) < 1e-15) continue;
        const double d = c(j) - y.dot(a.col(j));
        const bool atu = at_upper[j] == 1;
        if (!atu && d < -opt.opt_tol) {
          const double score = -d;
          if (bland) {
            enter = j;
            enter_increase = true;
            break;
          }
          if (score > best_score) {
            best_score = score;
            enter = j;
            enter_increase = true;
          }
        } else if (atu && d > opt.opt_tol) {
          const double score = d;
          if (bland) {
            enter = j;
            enter_increase = false;
            break;
          }
          if (score > best_score) {
            best_score = score;
            enter = j;
            enter_increase = false;
          }
        }
      }
      if (enter == -1) return LpStatus::Optimal;

      // Ratio test: x_enter moves by t >= 0 in direction dir (+1/-1).
      const double dir = enter_increase ? 1.0 : -1.0;
      Vector delta = lu.solve(a.col(enter));  // x_B changes by -delta * dir * t
      double t_max = kInf;
      int leave = -1;       // index into basis
      int leave_bound = 0;  // 0 -> leaves at lower, 1 -> at upper
      // Bound flip of the entering variable itself.
      const double span = up(enter) - lo(enter);
      if (std::isfinite(span)) t_max = span;
      for (int i = 0; i < m; ++i) {
        const double rate = -delta(i) * dir;  // dx_basis_i / dt
        if (std::abs(rate) < 1e-12) continue;
        double limit = kInf;
        int bound_hit = 0;
        if (rate > 0 && std::isfinite(up(basis[i]))) {
          limit = (up(basis[i]) - x(basis[i])) / rate;
          bound_hit = 1;
        } else if (rate < 0 && std::isfinite(lo(basis[i]))) {
          limit = (lo(basis[i]) - x(basis[i])) / rate;
          bound_hit = 0;
        }
        limit = std::max(limit, 0.0);
        const bool tie = bland && leave >= 0 && limit < t_max + 1e-12 &&
                         basis[i] < basis[leave];
        if (limit < t_max - 1e-12 || tie) {
          t_max = std::min(limit, t_max);
          leave = i;
          leave_bound = bound_hit;
        }
      }
      if (!std::isfinite(t_max)) return LpStatus::Unbounded;

      if (t_max <= opt.opt_tol) {
        ++degenerate_run;
        if (degenerate_run > 40) bland = true;
      } else {
        degenerate_run = 0;
      }

      // Apply the step.
      for (int i = 0; i < m; ++i) x(basis[i]) += -delta(i) * dir * t_max;
      x(enter) += dir * t_max;
      if (leave == -1) {
        at_upper[enter] = enter_increase ? 1 : 0;  // bound flip
      } else {
        const int out_var = basis[leave];
        at_upper[out_var] = leave_bound;
        x(out_var) = leave_bound == 1 ? up(out_var) : lo(out_var);
        basis[leave] = enter;
      }
    }
    return LpStatus::Optimal;  // pivot cap; callers treat result as-is
  }
};

}  // namespace

RmpResult solve_rmp(const RmpModel& model, const LpOptions& options) {
  // Rows with no finite side carry no dual information; solve without them.
  bool has_vacuous = false;
  for (int i = 0; i < model.num_rows(); ++i) {
    if (!model.bl[i] && !model.bu[i]) has_vacuous = true;
  }
  if (has_vacuous) {
    RmpModel trimmed;
    std::vector<int> keep;
    for (int i = 0; i < model.num_rows(); ++i) {
      if (model.bl[i] || model.bu[i]) keep.push_back(i);
    }
    auto shrink = [&](const Vector& rows) {
      Vector r(static_cast<int>(keep.size()));
      for (std::size_t t = 0; t < keep.size(); ++t) r(static_cast<int>(t)) = rows(keep[t]);
      return r;
    };
    for (const auto& col : model.columns) trimmed.columns.push_back({col.obj, shrink(col.rows)});
    for (const auto& dir : model.directions) trimmed.directions.push_back({dir.obj, shrink(dir.rows)});
    for (const auto& ax : model.aux) trimmed.aux.push_back({ax.obj, shrink(ax.rows), ax.lb});
    for (int i : keep) {
      trimmed.bl.push_back(model.bl[i]);
      trimmed.bu.push_back(model.bu[i]);
    }
    RmpResult inner = solve_rmp(trimmed, options);
    if (inner.status != LpStatus::Optimal) return inner;
    Vector mu_l = Vector::Zero(model.num_rows());
    Vector mu_u = Vector::Zero(model.num_rows());
    for (std::size_t t = 0; t < keep.size(); ++t) {
      mu_l(keep[t]) = inner.duals.mu_l(static_cast<int>(t));
      mu_u(keep[t]) = inner.duals.mu_u(static_cast<int>(t));
    }
    inner.duals.mu_l = mu_l;
    inner.duals.mu_u = mu_u;
    return inner;
  }

  const int m_rows = model.num_rows();
  const int nc = static_cast<int>(model.columns.size());
  const int nd = static_cast<int>(model.directions.size());
  const int na = static_cast<int>(model.aux.size());
  if (nc == 0) throw DomainError("solve_rmp: at least one column required");

  const int n_struct = nc + nd + na;
  const int n_slack = m_rows;
  const int n_art = 1 + m_rows;
  const int n_total = n_struct + n_slack + n_art;
  const int m_eq = 1 + m_rows;

  BoundedSimplex sx;
  sx.opt = options;
  sx.m = m_eq;
  sx.n = n_total;
  sx.a = Matrix::Zero(m_eq, n_total);
  sx.b = Vector::Zero(m_eq);
  sx.b(0) = 1.0;
  sx.c = Vector::Zero(n_total);
  sx.lo = Vector::Zero(n_total);
  sx.up = Vector::Constant(n_total, kInf);

  for (int j = 0; j < nc; ++j) {
    sx.a(0, j) = 1.0;
    for (int i = 0; i < m_rows; ++i) sx.a(1 + i, j) = model.columns[j].rows(i);
  }
  for (int j = 0; j < nd; ++j) {
    for (int i = 0; i < m_rows; ++i) sx.a(1 + i, nc + j) = model.directions[j].rows(i);
  }
  for (int j = 0; j < na; ++j) {
    for (int i = 0; i < m_rows; ++i) sx.a(1 + i, nc + nd + j) = model.aux[j].rows(i);
    sx.lo(nc + nd + j) = model.aux[j].lb;
  }
  // Row slacks: row value - slack = 0, slack in [bl, bu].
  for (int i = 0; i < m_rows; ++i) {
    const int j = n_struct + i;
    sx.a(1 + i, j) = -1.0;
    sx.lo(j) = model.bl[i] ? *model.bl[i] : -kInf;
    sx.up(j) = model.bu[i] ? *model.bu[i] : kInf;
  }

  // Initial nonbasic rest point.
  sx.x = Vector::Zero(n_total);
  sx.at_upper.assign(n_total, 0);
  for (int j = 0; j < n_struct; ++j) sx.x(j) = sx.lo(j);
  for (int i = 0; i < m_rows; ++i) {
    const int j = n_struct + i;
    if (std::isfinite(sx.lo(j))) {
      sx.x(j) = sx.lo(j);
      sx.at_upper[j] = 0;
    } else {
      sx.x(j) = sx.up(j);
      sx.at_upper[j] = 1;
    }
  }

  // Artificials aligned with the residual sign; phase-1 cost 1.
  Vector residual = sx.b;
  for (int j = 0; j < n_struct + n_slack; ++j) residual -= sx.a.col(j) * sx.x(j);
  sx.basis.resize(m_eq);
  for (int i = 0; i < m_eq; ++i) {
    const int j = n_struct + n_slack + i;
    sx.a(i, j) = residual(i) >= 0.0 ? 1.0 : -1.0;
    sx.x(j) = std::abs(residual(i));
    sx.basis[i] = j;
    sx.c(j) = 1.0;
  }

  // Phase 1.
  if (sx.run() != LpStatus::Optimal) throw DomainError("solve_rmp: phase-1 failure");
  double infeas = 0.0;
  for (int i = 0; i < m_eq; ++i) infeas += std::abs(sx.x(n_struct + n_slack + i));
  RmpResult result;
  if (infeas > options.feas_tol) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Phase 2: real costs; artificials pinned to zero.
  sx.c.setZero();
  for (int j = 0; j < nc; ++j) sx.c(j) = model.columns[j].obj;
  for (int j = 0; j < nd; ++j) sx.c(nc + j) = model.directions[j].obj;
  for (int j = 0; j < na; ++j) sx.c(nc + nd + j) = model.aux[j].obj;
  for (int i = 0; i < m_eq; ++i) {
    const int j = n_struct + n_slack + i;
    sx.lo(j) = 0.0;
    sx.up(j) = 0.0;
    sx.x(j) = std::min(std::max(sx.x(j), 0.0), 0.0);
  }
  const LpStatus phase2 = sx.run();
  if (phase2 == LpStatus::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  // Extract primal values and duals.
  Matrix bmat(m_eq, m_eq);
  for (int i = 0; i < m_eq; ++i) bmat.col(i) = sx.a.col(sx.basis[i]);
  Vector cb(m_eq);
  for (int i = 0; i < m_eq; ++i) cb(i) = sx.c(sx.basis[i]);
  Vector y = Eigen::PartialPivLU<Matrix>(bmat.transpose()).solve(cb);

  result.status = LpStatus::Optimal;
  result.alpha = sx.x.head(nc);
  result.gamma = sx.x.segment(nc, nd);
  result.aux_values = sx.x.segment(nc + nd, na);
  result.objective = sx.c.head(n_struct).dot(sx.x.head(n_struct));
  result.duals.nu = -y(0);
  result.duals.mu_l = Vector::Zero(m_rows);
  result.duals.mu_u = Vector::Zero(m_rows);
  for (int i = 0; i < m_rows; ++i) {
    const double yi = y(1 + i);
    if (yi > 0.0) result.duals.mu_l(i) = yi;
    else result.duals.mu_u(i) = -yi;
  }
  result.aux_reduced_costs = Vector::Zero(na);
  for (int j = 0; j < na; ++j) {
    const int col = nc + nd + j;
    result.aux_reduced_costs(j) = sx.c(col) - y.dot(sx.a.col(col));
  }
  return result;
}

}  // namespace lsopr
