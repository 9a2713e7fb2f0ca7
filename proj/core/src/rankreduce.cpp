#include "lsopr/rankreduce.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lsopr {

namespace {

struct Block {
  Matrix left;   // n x a basis
  Matrix right;  // p x a basis
  std::vector<int> coords;  // diagonal coordinates (Diag space)
  int size = 0;
  bool positive = true;  // sign the block must keep
};

struct DirectionPlan {
  bool diag_space = false;
  Block a, b;
};

// Eigen/singular-vector windows feeding the null-space system. Indices are
// 0-based positions in the descending spectrum ordering.
std::optional<DirectionPlan> make_plan(const ReductionState& state, const Instance& inst,
                                       double rank_tol) {
  const DomainSet& d = inst.domain;
  const int n = d.space.n;
  const int kt = d.ktilde;
  const int r = state.rank;
  DirectionPlan plan;

  switch (d.space.kind) {
    case SpaceKind::Psd: {
      if (r < kt) return std::nullopt;
      SpectrumOrdered dec = sorted_eigs(state.x);
      plan.a.size = r - kt + 1;
      plan.a.left = dec.left_basis.middleCols(kt - 1, plan.a.size);
      plan.a.right = plan.a.left;
      plan.a.positive = true;
      return plan;
    }
    case SpaceKind::NonSym: {
      if (r < kt) return std::nullopt;
      SpectrumOrdered dec = sorted_svd(state.x);
      plan.a.size = r - kt + 1;
      plan.a.left = dec.left_basis.middleCols(kt - 1, plan.a.size);
      plan.a.right = dec.right_basis.middleCols(kt - 1, plan.a.size);
      plan.a.positive = true;
      return plan;
    }
    case SpaceKind::Sym: {
      SpectrumOrdered dec = sorted_eigs(state.x);
      if (d.f.sign_invariant() && !state.certificate.branch) {
        // Window of the (r - kt + 1) smallest-magnitude nonzero eigenvalues,
        // split by sign into trace-free sub-blocks.
        if (r < kt) return std::nullopt;
        std::vector<int> nonzero;
        for (int i = 0; i < n; ++i) {
          if (std::abs(dec.values(i)) > rank_tol) nonzero.push_back(i);
        }
        std::sort(nonzero.begin(), nonzero.end(), [&](int u, int v) {
          return std::abs(dec.values(u)) < std::abs(dec.values(v));
        });
        std::vector<int> pos, neg;
        for (int t = 0; t < r - kt + 1 && t < static_cast<int>(nonzero.size()); ++t) {
          (dec.values(nonzero[t]) > 0.0 ? pos : neg).push_back(nonzero[t]);
        }
        plan.a.size = static_cast<int>(pos.size());
        plan.b.size = static_cast<int>(neg.size());
        if (plan.a.size > 0) {
          plan.a.left.resize(n, plan.a.size);
          for (int t = 0; t < plan.a.size; ++t) plan.a.left.col(t) = dec.left_basis.col(pos[t]);
          plan.a.right = plan.a.left;
        }
        if (plan.b.size > 0) {
          plan.b.left.resize(n, plan.b.size);
          for (int t = 0; t < plan.b.size; ++t) plan.b.left.col(t) = dec.left_basis.col(neg[t]);
          plan.b.right = plan.b.left;
          plan.b.positive = false;
        }
        return plan;
      }
      // Branch form: positive tail below the certificate's head, negative
      // head above its tail.
      const int s = state.certificate.branch.value_or(kt + 1);
      int d1 = 1;  // first zero position, 1-based
      while (d1 <= n && dec.values(d1 - 1) > rank_tol) ++d1;
      const int d2 = d1 + (n - r);
      const int pos_lo = std::max(s - 1, 1), pos_hi = d1 - 1;
      const int neg_lo = d2, neg_hi = std::min(s + n - kt, n);
      plan.a.size = std::max(0, pos_hi - pos_lo + 1);
      plan.b.size = std::max(0, neg_hi - neg_lo + 1);
      if (plan.a.size > 0) {
        plan.a.left = dec.left_basis.middleCols(pos_lo - 1, plan.a.size);
        plan.a.right = plan.a.left;
      }
      if (plan.b.size > 0) {
        plan.b.left = dec.left_basis.middleCols(neg_lo - 1, plan.b.size);
        plan.b.right = plan.b.left;
        plan.b.positive = false;
      }
      if (plan.a.size + plan.b.size == 0) return std::nullopt;
      return plan;
    }
    case SpaceKind::Diag: {
      plan.diag_space = true;
      Vector diag = state.x.diagonal();
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      if (d.f.sign_invariant() && !state.certificate.branch) {
        if (r < kt) return std::nullopt;
        std::vector<int> nonzero;
        for (int c = 0; c < n; ++c) {
          if (std::abs(diag(c)) > rank_tol) nonzero.push_back(c);
        }
        std::sort(nonzero.begin(), nonzero.end(), [&](int u, int v) {
          return std::abs(diag(u)) < std::abs(diag(v));
        });
        for (int t = 0; t < r - kt + 1 && t < static_cast<int>(nonzero.size()); ++t) {
          (diag(nonzero[t]) > 0.0 ? plan.a.coords : plan.b.coords).push_back(nonzero[t]);
        }
      } else {
        const int s = state.certificate.branch.value_or(kt + 1);
        std::sort(order.begin(), order.end(), [&](int u, int v) { return diag(u) > diag(v); });
        int d1 = 1;
        while (d1 <= n && diag(order[d1 - 1]) > rank_tol) ++d1;
        const int d2 = d1 + (n - r);
        const int pos_lo = std::max(s - 1, 1), pos_hi = d1 - 1;
        const int neg_lo = d2, neg_hi = std::min(s + n - kt, n);
        for (int t = pos_lo; t <= pos_hi; ++t) plan.a.coords.push_back(order[t - 1]);
        for (int t = neg_lo; t <= neg_hi; ++t) plan.b.coords.push_back(order[t - 1]);
      }
      plan.a.size = static_cast<int>(plan.a.coords.size());
      plan.b.size = static_cast<int>(plan.b.coords.size());
      plan.b.positive = false;
      if (plan.a.size + plan.b.size == 0) return std::nullopt;
      return plan;
    }
  }
  return std::nullopt;
}

Matrix sym_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

std::optional<Matrix> direction_from_plan(const DirectionPlan& plan, const Instance& inst) {
  const int m = inst.num_rows();
  if (plan.diag_space) {
    const int na = plan.a.size, nb = plan.b.size;
    const int dim = na + nb;
    if (dim == 0) return std::nullopt;
    const int n_trace = (na > 0 ? 1 : 0) + (nb > 0 ? 1 : 0);
    Matrix rows = Matrix::Zero(m + n_trace, dim);
    for (int i = 0; i < m; ++i) {
      const Vector ad = inst.constraints[i].a.diagonal();
      for (int t = 0; t < na; ++t) rows(i, t) = ad(plan.a.coords[t]);
      for (int t = 0; t < nb; ++t) rows(i, na + t) = ad(plan.b.coords[t]);
    }
    int tr = m;
    if (na > 0) {
      for (int t = 0; t < na; ++t) rows(tr, t) = 1.0;
      ++tr;
    }
    if (nb > 0) {
      for (int t = 0; t < nb; ++t) rows(tr, na + t) = 1.0;
    }
    auto v = nullspace_unit_vector(rows, dim);
    if (!v) return std::nullopt;
    Matrix y = Matrix::Zero(inst.domain.space.n, inst.domain.space.p);
    for (int t = 0; t < na; ++t) y(plan.a.coords[t], plan.a.coords[t]) = (*v)(t);
    for (int t = 0; t < nb; ++t) y(plan.b.coords[t], plan.b.coords[t]) = (*v)(na + t);
    return y;
  }

  const int a = plan.a.size, b = plan.b.size;
  const int va = a * (a + 1) / 2, vb = b * (b + 1) / 2;
  const int dim = va + vb;
  if (dim == 0) return std::nullopt;
  const int n_trace = (a > 0 ? 1 : 0) + (b > 0 ? 1 : 0);
  Matrix rows = Matrix::Zero(m + n_trace, dim);
  for (int i = 0; i < m; ++i) {
    if (a > 0) {
      const Matrix proj = sym_part(plan.a.left.transpose() * inst.constraints[i].a * plan.a.right);
      rows.block(i, 0, 1, va) = sym_to_vec(proj).transpose();
    }
    if (b > 0) {
      const Matrix proj = sym_part(plan.b.left.transpose() * inst.constraints[i].a * plan.b.right);
      rows.block(i, va, 1, vb) = sym_to_vec(proj).transpose();
    }
  }
  int tr = m;
  if (a > 0) {
    rows.block(tr, 0, 1, va) = sym_to_vec(Matrix::Identity(a, a)).transpose();
    ++tr;
  }
  if (b > 0) {
    rows.block(tr, va, 1, vb) = sym_to_vec(Matrix::Identity(b, b)).transpose();
  }
  auto v = nullspace_unit_vector(rows, dim);
  if (!v) return std::nullopt;
  Matrix y = Matrix::Zero(inst.domain.space.n, inst.domain.space.p);
  if (a > 0) y += plan.a.left * vec_to_sym(v->head(va), a) * plan.a.right.transpose();
  if (b > 0) y += plan.b.left * vec_to_sym(v->tail(vb), b) * plan.b.right.transpose();
  return y;
}

struct StepChecker {
  const ReductionState& state;
  const Instance& inst;
  DirectionPlan plan;
  Matrix y;

  bool feasible(double delta) const {
    const DomainSet& d = inst.domain;
    const Matrix xd = state.x + delta * y;
    const double scale = 1.0 + state.spectrum.cwiseAbs().maxCoeff();
    const double sign_tol = 1e-11 * scale;
    // Sign-definiteness of the perturbed blocks.
    auto block_ok = [&](const Block& blk) {
      if (blk.size == 0) return true;
      Vector vals;
      if (plan.diag_space) {
        vals.resize(blk.size);
        for (int t = 0; t < blk.size; ++t) vals(t) = xd(blk.coords[t], blk.coords[t]);
      } else {
        const Matrix small = sym_part(blk.left.transpose() * xd * blk.right);
        vals = sorted_eigs(small, 1e-6).values;
      }
      if (blk.positive) return vals.minCoeff() >= -sign_tol;
      return vals.maxCoeff() <= sign_tol;
    };
    if (!block_ok(plan.a) || !block_ok(plan.b)) return false;
    // Majorization against the held certificate.
    const double maj_tol = 1e-12 * scale * (1.0 + d.space.n);
    Vector lam = domain_spectrum(xd, d);
    if (d.space.kind == SpaceKind::Psd) {
      return majorizes(state.certificate.x, lam, false, maj_tol);
    }
    if (d.space.kind == SpaceKind::NonSym) {
      return majorizes(state.certificate.x, lam, true, maj_tol);
    }
    if (d.f.sign_invariant() && !state.certificate.branch) {
      Vector abs = lam.cwiseAbs();
      return majorizes(state.certificate.x, abs, true, maj_tol);
    }
    return majorizes(state.certificate.x, lam, false, maj_tol);
  }
};

}  // namespace

std::optional<Matrix> build_direction(const ReductionState& state, const Instance& inst,
                                      double rank_tol) {
  auto plan = make_plan(state, inst, rank_tol);
  if (!plan) return std::nullopt;
  auto y = direction_from_plan(*plan, inst);
  if (!y) return std::nullopt;
  if (frobenius_inner(inst.a0, *y) >= 0.0) *y = -*y;
  return y;
}

double max_step(const ReductionState& state, const Matrix& y, const Instance& inst) {
  auto plan = make_plan(state, inst, Tolerances::rank);
  if (!plan) return 0.0;
  StepChecker checker{state, inst, *plan, y};
  if (!checker.feasible(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  if (checker.feasible(1.0)) {
    lo = 1.0;
    while (lo < std::ldexp(1.0, 60)) {
      const double t = 2.0 * lo;
      if (!checker.feasible(t)) {
        hi = t;
        break;
      }
      lo = t;
    }
    if (lo >= std::ldexp(1.0, 60)) return lo;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (checker.feasible(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

Solution reduce_rank(const Solution& solution, const Instance& inst,
                     const ReduceOptions& opts) {
  const DomainSet& d = inst.domain;
  const int n = d.space.n;
  const int cap = opts.max_iterations > 0 ? opts.max_iterations : 50 * n;

  Solution out = solution;
  Matrix x = solution.x;
  std::optional<int> branch = solution.branch;
  if (!branch && solution.certificate) branch = solution.certificate->branch;

  for (int it = 0; it < cap; ++it) {
    Vector lam = domain_spectrum(x, d);
    auto cert = spectrum_certificate(lam, d, branch);
    if (!cert) break;
    ReductionState state;
    state.x = x;
    state.certificate = *cert;
    state.spectrum = lam;
    state.rank = numeric_rank(lam, opts.rank_tol);

    auto y = build_direction(state, inst, opts.rank_tol);
    if (!y) {
      out.status = SolveStatus::Optimal;
      break;
    }
    double delta = max_step(state, *y, inst);
    if (delta <= 1e-13) {
      // Degenerate boundary: the reversed direction is admissible only when
      // it cannot raise the objective.
      const double slope = frobenius_inner(inst.a0, *y);
      if (std::abs(slope) <= 1e-12 * (1.0 + inst.a0.norm())) {
        Matrix yneg = -*y;
        const double dneg = max_step(state, yneg, inst);
        if (dneg > 1e-13) {
          x += dneg * yneg;
          continue;
        }
      }
      out.status = SolveStatus::Optimal;
      break;
    }
    x += delta * *y;
    if (it + 1 == cap) out.status = SolveStatus::IterationLimit;
  }

  out.x = x;
  Vector lam = domain_spectrum(x, d);
  out.rank = numeric_rank(lam, opts.rank_tol);
  out.certificate = spectrum_certificate(lam, d, branch);
  out.objective = frobenius_inner(inst.a0, x);
  if (!inst.aux_vars.empty() && out.aux_values.size() == static_cast<int>(inst.aux_vars.size())) {
    for (std::size_t j = 0; j < inst.aux_vars.size(); ++j) {
      out.objective += inst.aux_vars[j].obj * out.aux_values(static_cast<int>(j));
    }
  }
  out.gap = out.objective - out.dual_bound;
  return out;
}

}  // namespace lsopr
