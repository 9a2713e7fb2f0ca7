#include "lsopr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "lsopr/rng.hpp"

namespace lsopr {
namespace oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double subset_max(const Vector& v, int card) {
  const int n = static_cast<int>(v.size());
  double best = -kInf;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != card) continue;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) acc += v(i);
    }
    best = std::max(best, acc);
  }
  return best;
}

}  // namespace

bool brute_majorization(const Vector& x, const Vector& y, bool weak) {
  if (x.size() != y.size()) throw DomainError("brute_majorization: length mismatch");
  const int n = static_cast<int>(x.size());
  if (n > 12) throw SizeLimitError("brute_majorization: n <= 12");
  const double tol = Tolerances::majorization;
  for (int card = 1; card <= n; ++card) {
    if (subset_max(x, card) < subset_max(y, card) - tol) return false;
  }
  if (!weak && std::abs(x.sum() - y.sum()) > tol) return false;
  return true;
}

namespace {

// Feasibility box edge per kind for the grid search.
double grid_box_edge(const SpectralFunction& f) {
  switch (f.kind) {
    case FunctionKind::LpBall:
    case FunctionKind::SpectralNormBall:
      return f.c;
    case FunctionKind::NuclearBall:
      return f.z;
    case FunctionKind::FrobeniusSq:
      return std::sqrt(std::max(f.z, 0.0));
    case FunctionKind::TraceBox:
    case FunctionKind::TraceLogDet:
      return std::max(f.hi, 0.0);
    case FunctionKind::LogDetLb:
      return std::min(std::exp(std::max(f.z, 1.0)) / std::min(f.alpha, 1.0), 1e3);
    case FunctionKind::Zero:
      return 0.0;
  }
  return 0.0;
}

double eval_objective(const Vector& beta, const Vector& lambda_k, int n,
                      const SpectralFunction& f, int k) {
  Vector lambda = Vector::Zero(n);
  for (int i = 0; i < k; ++i) lambda(i) = lambda_k(i);
  double fv;
  try {
    fv = f.eval(lambda);
  } catch (const DomainError&) {
    return -kInf;
  }
  if (fv > 1e-9) return -kInf;
  double acc = 0.0;
  for (int i = 0; i < k; ++i) acc += beta(i) * lambda_k(i);
  return acc;
}

}  // namespace

double brute_pricing(const Vector& beta, int k, const SpectralFunction& f) {
  const int n = static_cast<int>(beta.size());
  k = std::min(k, n);
  if (k > 3) throw SizeLimitError("brute_pricing: k <= 3");
  if (f.kind == FunctionKind::Zero) {
    return beta.head(k).maxCoeff() > 0.0 ? kInf : 0.0;
  }
  const double edge = grid_box_edge(f);
  if (edge <= 0.0) return 0.0;

  Vector center = Vector::Constant(k, 0.5 * edge);
  double width = edge;
  double best = eval_objective(beta, Vector::Zero(k), n, f, k);
  Vector best_pt = Vector::Zero(k);
  const int pts = 21;
  int rounds = 0;
  double cell = width / (pts - 1);
  while (rounds < 3 || cell > 1e-5) {
    Vector lo(k), hi(k);
    for (int i = 0; i < k; ++i) {
      lo(i) = std::max(0.0, center(i) - 0.5 * width);
      hi(i) = std::min(edge, lo(i) + width);
      lo(i) = std::max(0.0, hi(i) - width);
    }
    Vector probe(k);
    std::vector<int> idx(k, 0);
    bool carry = false;
    while (!carry) {
      for (int i = 0; i < k; ++i) {
        probe(i) = lo(i) + (hi(i) - lo(i)) * idx[i] / (pts - 1);
      }
      const double val = eval_objective(beta, probe, n, f, k);
      if (val > best) {
        best = val;
        best_pt = probe;
      }
      int pos = 0;
      while (pos < k && ++idx[pos] == pts) {
        idx[pos] = 0;
        ++pos;
      }
      carry = pos == k;
    }
    center = best_pt;
    width = 4.0 * (hi(0) - lo(0)) / (pts - 1);
    cell = width / (pts - 1);
    ++rounds;
    if (rounds > 12) break;
  }
  return best;
}

namespace {

// Minimal linear program by vertex enumeration: min c.x s.t. G x <= h over
// at most 4 variables. Every d-subset of tight constraints is solved and
// checked. Returns +inf when infeasible.
double vertex_lp(const Vector& c, const Matrix& g, const Vector& h) {
  const int d = static_cast<int>(c.size());
  const int m = static_cast<int>(g.rows());
  double best = kInf;
  std::vector<int> comb(d);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == d) {
      Matrix a(d, d);
      Vector b(d);
      for (int t = 0; t < d; ++t) {
        a.row(t) = g.row(comb[t]);
        b(t) = h(comb[t]);
      }
      Eigen::FullPivLU<Matrix> lu(a);
      if (!lu.isInvertible()) return;
      Vector x = lu.solve(b);
      if (((g * x).array() > h.array() + 1e-9).any()) return;
      best = std::min(best, c.dot(x));
      return;
    }
    for (int i = start; i < m; ++i) {
      comb[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  if (d == 0) {
    return ((h.array() >= -1e-9).all()) ? 0.0 : kInf;
  }
  rec(0, 0);
  return best;
}

// f-ball inequalities on the magnitude vector u >= 0 (support variables).
bool append_ball_rows(const SpectralFunction& f, int d, std::vector<Vector>& rows,
                      std::vector<double>& rhs) {
  switch (f.kind) {
    case FunctionKind::SpectralNormBall:
    case FunctionKind::LpBall: {
      if (f.kind == FunctionKind::LpBall && !(std::isinf(f.ell) || f.ell == 1.0)) return false;
      const double c = f.c;
      if (f.kind == FunctionKind::SpectralNormBall || std::isinf(f.ell)) {
        for (int i = 0; i < d; ++i) {
          Vector row = Vector::Zero(d);
          row(i) = 1.0;
          rows.push_back(row);
          rhs.push_back(c);
        }
      } else {
        rows.push_back(Vector::Ones(d));
        rhs.push_back(c);
      }
      return true;
    }
    case FunctionKind::NuclearBall:
      rows.push_back(Vector::Ones(d));
      rhs.push_back(f.z);
      return true;
    default:
      return false;
  }
}

}  // namespace

double brute_lsop_diag(const Instance& inst) {
  const DomainSet& dom = inst.domain;
  if (dom.space.kind != SpaceKind::Diag) throw DomainError("brute_lsop_diag: diag space only");
  const int n = dom.space.n;
  const int k = dom.k;
  if (n > 12 || k > 4) throw SizeLimitError("brute_lsop_diag: n <= 12, k <= 4");

  const Vector c_full = inst.a0.diagonal();
  const int m = inst.num_rows();
  double best = kInf;

  std::vector<int> support;
  std::function<void(int)> visit_support = [&](int) {};
  auto solve_support = [&]() {
    const int d = static_cast<int>(support.size());
    for (unsigned signs = 0; signs < (1u << d); ++signs) {
      // x_c = s_c * u_c with u >= 0.
      std::vector<Vector> rows;
      std::vector<double> rhs;
      Vector c(d);
      for (int t = 0; t < d; ++t) {
        const double s = (signs & (1u << t)) ? -1.0 : 1.0;
        c(t) = s * c_full(support[t]);
        Vector nonneg = Vector::Zero(d);
        nonneg(t) = -1.0;
        rows.push_back(nonneg);
        rhs.push_back(0.0);
      }
      for (int i = 0; i < m; ++i) {
        const Vector ad = inst.constraints[i].a.diagonal();
        Vector row(d);
        for (int t = 0; t < d; ++t) {
          const double s = (signs & (1u << t)) ? -1.0 : 1.0;
          row(t) = s * ad(support[t]);
        }
        if (inst.constraints[i].bu) {
          rows.push_back(row);
          rhs.push_back(*inst.constraints[i].bu);
        }
        if (inst.constraints[i].bl) {
          rows.push_back(-row);
          rhs.push_back(-*inst.constraints[i].bl);
        }
      }
      if (!append_ball_rows(dom.f, d, rows, rhs)) {
        throw SizeLimitError("brute_lsop_diag: unsupported spectral kind");
      }
      Matrix g(static_cast<int>(rows.size()), d);
      Vector h(static_cast<int>(rows.size()));
      for (std::size_t t = 0; t < rows.size(); ++t) {
        g.row(static_cast<int>(t)) = rows[t].transpose();
        h(static_cast<int>(t)) = rhs[t];
      }
      best = std::min(best, vertex_lp(c, g, h));
    }
  };

  std::function<void(int, int)> rec = [&](int start, int remaining) {
    solve_support();
    if (remaining == 0) return;
    for (int i = start; i < n; ++i) {
      support.push_back(i);
      rec(i + 1, remaining - 1);
      support.pop_back();
    }
  };
  rec(0, k);
  return best;
}

namespace {

// Feasible t-interval of f on the rank-one spectrum t * e1 (t of any sign,
// n - 1 zero entries alongside).
void f_interval(const SpectralFunction& f, int n, double& lo, double& hi) {
  switch (f.kind) {
    case FunctionKind::Zero:
      return;
    case FunctionKind::LpBall:
    case FunctionKind::SpectralNormBall: {
      lo = std::max(lo, -f.c);
      hi = std::min(hi, f.c);
      return;
    }
    case FunctionKind::NuclearBall:
      lo = std::max(lo, -f.z);
      hi = std::min(hi, f.z);
      return;
    case FunctionKind::FrobeniusSq: {
      const double r = std::sqrt(std::max(f.z, 0.0));
      lo = std::max(lo, -r);
      hi = std::min(hi, r);
      return;
    }
    case FunctionKind::TraceBox:
      lo = std::max(lo, f.lo);
      hi = std::min(hi, f.hi);
      return;
    case FunctionKind::TraceLogDet:
      lo = std::max(lo, std::expm1(f.lo));
      hi = std::min(hi, f.hi);
      return;
    case FunctionKind::LogDetLb:
      lo = std::max(lo, std::exp(f.z - (n - 1) * std::log(f.alpha)) - f.alpha);
      return;
  }
}

double best_along(const Instance& inst, const Vector& u) {
  const DomainSet& dom = inst.domain;
  double lo = dom.space.kind == SpaceKind::Psd ? 0.0 : -kInf;
  double hi = kInf;
  f_interval(dom.f, dom.space.n, lo, hi);
  const double a0u = u.dot(inst.a0 * u);
  for (const auto& row : inst.constraints) {
    const double c = u.dot(row.a * u);
    if (std::abs(c) < 1e-14) {
      const bool ok_l = !row.bl || *row.bl <= 1e-12;
      const bool ok_u = !row.bu || *row.bu >= -1e-12;
      if (!ok_l || !ok_u) return kInf;
      continue;
    }
    if (row.bu) {
      if (c > 0) hi = std::min(hi, *row.bu / c);
      else lo = std::max(lo, *row.bu / c);
    }
    if (row.bl) {
      if (c > 0) lo = std::max(lo, *row.bl / c);
      else hi = std::min(hi, *row.bl / c);
    }
  }
  if (lo > hi + 1e-12) return kInf;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    // Unbounded scalar range: the objective decides.
    if (!std::isfinite(hi) && a0u < 0) return -kInf;
    if (!std::isfinite(lo) && a0u > 0) return -kInf;
    lo = std::isfinite(lo) ? lo : std::min(0.0, hi);
    hi = std::isfinite(hi) ? hi : std::max(0.0, lo);
  }
  return std::min(a0u * lo, a0u * hi);
}

}  // namespace

double brute_rank1_grid(const Instance& inst, int min_samples) {
  const int n = inst.domain.space.n;
  if (inst.domain.k != 1) throw SizeLimitError("brute_rank1_grid: k == 1 only");
  if (n > 6) throw SizeLimitError("brute_rank1_grid: n <= 6");
  double best = kInf;
  Vector best_u;

  auto consider = [&](const Vector& u) {
    const double val = best_along(inst, u);
    if (val < best) {
      best = val;
      best_u = u;
    }
  };

  if (n == 1) {
    Vector u(1);
    u(0) = 1.0;
    consider(u);
    return best;
  }
  if (n == 2) {
    const int steps = std::max(min_samples, 2000);
    for (int t = 0; t < steps; ++t) {
      const double ang = M_PI * t / steps;
      Vector u(2);
      u << std::cos(ang), std::sin(ang);
      consider(u);
    }
  } else if (n == 3) {
    // Spherical Fibonacci lattice.
    const int pts = std::max(min_samples, 100000);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int t = 0; t < pts; ++t) {
      const double y = 1.0 - 2.0 * (t + 0.5) / pts;
      const double rad = std::sqrt(std::max(0.0, 1.0 - y * y));
      const double phi = golden * t;
      Vector u(3);
      u << rad * std::cos(phi), y, rad * std::sin(phi);
      consider(u);
    }
  } else {
    SplitMix64 rng(0x5eedu);
    for (int t = 0; t < 2 * min_samples; ++t) {
      Vector u = rng.normal_vector(n);
      u.normalize();
      consider(u);
    }
  }
  // Local refinement around the incumbent direction.
  if (best_u.size() == n) {
    SplitMix64 rng(0x5eed5eedull);
    double radius = 0.2;
    for (int round = 0; round < 4; ++round) {
      for (int t = 0; t < 4000; ++t) {
        Vector u = best_u + radius * rng.normal_vector(n);
        u.normalize();
        consider(u);
      }
      radius *= 0.2;
    }
  }
  return best;
}

}  // namespace oracle
}  // namespace lsopr
