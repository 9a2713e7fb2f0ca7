#include "lsopr/colgen.hpp"

#include <algorithm>
#include <cmath>

namespace lsopr {

namespace {

using Pricer = std::function<PricingOutcome(const Matrix&)>;

Matrix spectrum_to_matrix(const Vector& lambda, const MatrixSpace& space) {
  Matrix x = Matrix::Zero(space.n, space.p);
  for (int i = 0; i < std::min<int>(space.n, static_cast<int>(lambda.size())); ++i) {
    x(i, i) = lambda(i);
  }
  return x;
}

std::optional<Matrix> branch_member(const DomainSet& d, int s) {
  const SpectralFunction& f = d.f;
  switch (f.kind) {
    case FunctionKind::Zero:
    case FunctionKind::LpBall:
    case FunctionKind::SpectralNormBall:
    case FunctionKind::NuclearBall:
    case FunctionKind::FrobeniusSq:
      return Matrix::Zero(d.space.n, d.space.p);
    case FunctionKind::TraceBox: {
      double lo = f.lo, hi = f.hi;
      if (s == 1) hi = std::min(hi, 0.0);
      if (s == d.ktilde + 1) lo = std::max(lo, 0.0);
      if (lo > hi) return std::nullopt;
      const double mass = std::min(std::max(0.0, lo), hi);
      Matrix x = Matrix::Zero(d.space.n, d.space.p);
      x(0, 0) = mass;
      return x;
    }
    default:
      return std::nullopt;
  }
}

struct LoopResult {
  Solution solution;
  std::vector<Matrix> points;
  std::vector<Matrix> directions;
};

LoopResult run_loop(const Instance& inst, const SolveOptions& opts,
                    const std::vector<Matrix>& init_points,
                    const std::vector<Matrix>& init_directions, const Pricer& pricer,
                    std::optional<int> branch) {
  const int m = inst.num_rows();
  const int max_iter = opts.max_iterations > 0 ? opts.max_iterations : 10 * m + 200;

  LoopResult out;
  std::vector<Matrix>& points = out.points;
  std::vector<Matrix>& directions = out.directions;
  points = init_points;
  directions = init_directions;

  RmpModel model;
  model.bl.resize(m);
  model.bu.resize(m);
  for (int i = 0; i < m; ++i) {
    model.bl[i] = inst.constraints[i].bl;
    model.bu[i] = inst.constraints[i].bu;
  }
  auto entry_for = [&](const Matrix& x) {
    RmpModel::Entry e;
    e.obj = frobenius_inner(inst.a0, x);
    e.rows = inst.row_values(x);
    return e;
  };
  for (const Matrix& x : points) model.columns.push_back(entry_for(x));
  for (const Matrix& d : directions) model.directions.push_back(entry_for(d));
  for (const AuxVar& ax : inst.aux_vars) model.aux.push_back({ax.obj, ax.row_coeffs, ax.lb});

  Solution& sol = out.solution;
  sol.branch = branch;
  int generated = 0;

  for (int iter = 1; iter <= max_iter; ++iter) {
    sol.iterations = iter;
    RmpResult rmp = solve_rmp(model);
    if (rmp.status == LpStatus::Infeasible) {
      sol.status = SolveStatus::Infeasible;
      return out;
    }
    if (rmp.status == LpStatus::Unbounded) {
      sol.status = SolveStatus::Unbounded;
      return out;
    }
    sol.objective = rmp.objective;
    sol.objective_history.push_back(rmp.objective);
    sol.aux_values = rmp.aux_values;

    Matrix xstar = Matrix::Zero(inst.domain.space.n, inst.domain.space.p);
    for (std::size_t h = 0; h < points.size(); ++h) xstar += rmp.alpha(static_cast<int>(h)) * points[h];
    for (std::size_t j = 0; j < directions.size(); ++j) xstar += rmp.gamma(static_cast<int>(j)) * directions[j];
    sol.x = xstar;

    Matrix a_tilde = -inst.a0;
    for (int i = 0; i < m; ++i) {
      a_tilde += (rmp.duals.mu_l(i) - rmp.duals.mu_u(i)) * inst.constraints[i].a;
    }

    PricingOutcome priced = pricer(a_tilde);
    if (priced.status == PricingStatus::Infeasible) {
      sol.status = SolveStatus::Infeasible;
      return out;
    }
    if (priced.status == PricingStatus::Unbounded) {
      Matrix dir = *priced.direction;
      for (const Matrix& existing : directions) {
        if ((existing - dir).norm() <= 1e-9) {
          throw DegeneratePricingError("colgen: pricing repeated an existing direction");
        }
      }
      directions.push_back(dir);
      model.directions.push_back(entry_for(dir));
      continue;
    }

    const double v_p = priced.value;
    double bound = -v_p;
    for (int i = 0; i < m; ++i) {
      if (model.bl[i]) bound += rmp.duals.mu_l(i) * *model.bl[i];
      if (model.bu[i]) bound -= rmp.duals.mu_u(i) * *model.bu[i];
    }
    for (std::size_t j = 0; j < inst.aux_vars.size(); ++j) {
      bound += std::max(rmp.aux_reduced_costs(static_cast<int>(j)), 0.0) * inst.aux_vars[j].lb;
    }

    if (v_p > rmp.duals.nu + opts.epsilon) {
      for (const Matrix& existing : points) {
        if ((existing - priced.x).norm() <= 1e-9) {
          throw DegeneratePricingError("colgen: pricing repeated an existing column");
        }
      }
      points.push_back(priced.x);
      model.columns.push_back(entry_for(priced.x));
      ++generated;
      continue;
    }

    sol.status = SolveStatus::Optimal;
    sol.dual_bound = bound;
    sol.gap = sol.objective - bound;
    sol.columns_generated = generated;
    Vector lambda = domain_spectrum(sol.x, inst.domain);
    sol.rank = numeric_rank(lambda, opts.rank_tol);
    sol.certificate = spectrum_certificate(lambda, inst.domain, branch);
    return out;
  }
  sol.status = SolveStatus::IterationLimit;
  sol.columns_generated = generated;
  return out;
}

// Elastic phase 1: minimize the total row violation over the hull.
std::vector<Matrix> elastic_phase1(const Instance& inst, const SolveOptions& opts,
                                   const Matrix& seed, const Pricer& pricer,
                                   std::optional<int> branch) {
  Instance relaxed = inst;
  relaxed.a0 = Matrix::Zero(inst.domain.space.n, inst.domain.space.p);
  for (auto& ax : relaxed.aux_vars) ax.obj = 0.0;
  const int m = inst.num_rows();
  for (int i = 0; i < m; ++i) {
    AuxVar up;
    up.obj = 1.0;
    up.row_coeffs = Vector::Zero(m);
    up.row_coeffs(i) = 1.0;
    AuxVar down = up;
    down.row_coeffs(i) = -1.0;
    relaxed.aux_vars.push_back(up);
    relaxed.aux_vars.push_back(down);
  }
  SolveOptions p1 = opts;
  p1.epsilon = 1e-9;
  LoopResult res = run_loop(relaxed, p1, {seed}, {}, pricer, branch);
  if (res.solution.status == SolveStatus::Infeasible) return {};
  if (res.solution.objective > Tolerances::row_feasibility) return {};
  return res.points;
}

Pricer domain_pricer(const DomainSet& d) {
  return [d](const Matrix& a_tilde) { return pricing_matrix(a_tilde, d); };
}

Pricer branch_pricer(const DomainSet& d, int s) {
  return [d, s](const Matrix& a_tilde) { return pricing_sym_indef(a_tilde, d, s); };
}

Matrix domain_seed(const Instance& inst) {
  Vector lambda = feasible_spectrum(inst.domain.f, inst.domain.space.n, inst.domain.k);
  return spectrum_to_matrix(lambda, inst.domain.space);
}

}  // namespace

std::vector<Matrix> initial_columns(const Instance& inst, const SolveOptions& opts) {
  if (inst.planted) return {*inst.planted};
  if (inst.num_rows() == 0) {
    PricingOutcome priced = pricing_matrix(-inst.a0, inst.domain);
    if (priced.status == PricingStatus::Optimal) return {priced.x};
    return {domain_seed(inst)};
  }
  return elastic_phase1(inst, opts, domain_seed(inst), domain_pricer(inst.domain),
                        std::nullopt);
}

Solution solve_lsopr(const Instance& inst, const SolveOptions& opts,
                     const ColumnPool* warm_start, ColumnPool* pool_out) {
  std::vector<Matrix> points;
  std::vector<Matrix> directions;
  if (warm_start && !warm_start->points.empty()) {
    points = warm_start->points;
    directions = warm_start->directions;
  } else {
    points = initial_columns(inst, opts);
    if (points.empty()) {
      Solution sol;
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
  }
  LoopResult res = run_loop(inst, opts, points, directions, domain_pricer(inst.domain),
                            std::nullopt);
  if (pool_out) {
    pool_out->points = res.points;
    pool_out->directions = res.directions;
  }
  return res.solution;
}

Solution solve_lsopr_indef(const Instance& inst, const SolveOptions& opts) {
  const DomainSet& d = inst.domain;
  if (d.space.kind != SpaceKind::Sym && d.space.kind != SpaceKind::Diag) {
    throw DomainError("solve_lsopr_indef: symmetric or diagonal space expected");
  }
  std::optional<Solution> best;
  bool any_unbounded = false;
  for (int s = 1; s <= d.ktilde + 1; ++s) {
    bool planted_in_branch = false;
    if (inst.planted) {
      auto cert = spectrum_certificate(domain_spectrum(*inst.planted, d), d, s);
      planted_in_branch = cert && cert->f_value <= Tolerances::membership;
    }
    std::vector<Matrix> points;
    if (planted_in_branch) {
      points = {*inst.planted};
    } else {
      auto member = branch_member(d, s);
      if (!member) continue;  // branch set empty
      if (inst.num_rows() == 0) {
        points = {*member};
      } else {
        Instance seeded = inst;
        seeded.planted.reset();
        points = elastic_phase1(seeded, opts, *member, branch_pricer(d, s), s);
        if (points.empty()) continue;  // branch infeasible
      }
    }
    LoopResult res = run_loop(inst, opts, points, {}, branch_pricer(d, s), s);
    Solution& sol = res.solution;
    if (sol.status == SolveStatus::Infeasible) continue;
    if (sol.status == SolveStatus::Unbounded) {
      any_unbounded = true;
      continue;
    }
    if (!best || sol.objective < best->objective - 1e-12) best = sol;
  }
  if (any_unbounded) {
    Solution sol;
    sol.status = SolveStatus::Unbounded;
    return sol;
  }
  if (!best) {
    Solution sol;
    sol.status = SolveStatus::Infeasible;
    return sol;
  }
  return *best;
}

}  // namespace lsopr
