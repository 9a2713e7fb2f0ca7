#include "lsopr/apps.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "lsopr/rng.hpp"

namespace lsopr {

GeneratedInstance gen_mimo(int n, int m, int k, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Vector x = rng.normal_vector(n);
  const double norm = x.norm();
  Matrix x0 = x * x.transpose() / norm;
  const double sigma1 = rng.next_uniform();
  const double sigma2 = rng.next_uniform();
  const double hi = norm + sigma1;               // tr(X0) + sigma1
  const double lo = std::log1p(norm) - sigma2;   // logdet(I + X0) - sigma2

  GeneratedInstance out;
  out.planted = x0;
  Instance& inst = out.instance;
  Matrix a0 = rng.normal_matrix(n, n);
  inst.a0 = 0.5 * (a0 + a0.transpose());
  for (int i = 0; i < m; ++i) {
    Matrix a = rng.normal_matrix(n, n);
    a = 0.5 * (a + a.transpose());
    const double mid = frobenius_inner(a, x0);
    Constraint row;
    row.a = a;
    row.bl = mid - rng.next_uniform();
    row.bu = mid + rng.next_uniform();
    inst.constraints.push_back(row);
  }
  inst.domain = DomainSet::make(MatrixSpace::psd(n), k, SpectralFunction::trace_logdet(hi, lo));
  inst.planted = x0;
  return out;
}

GeneratedInstance gen_opf(int n, int m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Vector x = rng.normal_vector(n);
  const double norm = x.norm();
  Matrix x0 = x * x.transpose() / norm;
  const double sigma1 = rng.next_uniform();
  const double sigma2 = rng.next_uniform();
  const double hi = norm + sigma1;
  const double lo = std::max(0.0, norm - sigma2);

  GeneratedInstance out;
  out.planted = x0;
  Instance& inst = out.instance;
  Matrix a0 = rng.normal_matrix(n, n);
  inst.a0 = 0.5 * (a0 + a0.transpose());
  for (int i = 0; i < m; ++i) {
    Matrix a = rng.normal_matrix(n, n);
    a = 0.5 * (a + a.transpose());
    Constraint row;
    row.a = a;
    row.bu = frobenius_inner(a, x0) + rng.next_uniform();
    inst.constraints.push_back(row);
  }
  inst.domain = DomainSet::make(MatrixSpace::psd(n), 1, SpectralFunction::trace_box(lo, hi));
  inst.planted = x0;
  return out;
}

McData gen_matrix_completion(int n, int p, int k, int num_obs, double noise,
                             std::uint64_t seed) {
  if (num_obs > n * p) throw DomainError("gen_matrix_completion: too many observations");
  SplitMix64 rng(seed);
  Matrix u = rng.normal_matrix(n, k);
  Matrix v = rng.normal_matrix(p, k);
  Matrix z = rng.normal_matrix(n, p);
  McData data;
  data.n = n;
  data.p = p;
  data.k = k;
  data.noise = noise;
  data.truth = u * v.transpose() + noise * z;
  std::unordered_set<long long> seen;
  while (static_cast<int>(data.observations.size()) < num_obs) {
    const long long cell = static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(n) * p));
    if (!seen.insert(cell).second) continue;
    const int i = static_cast<int>(cell / p);
    const int j = static_cast<int>(cell % p);
    data.observations.push_back({i, j, data.truth(i, j)});
  }
  return data;
}

Instance mc_inner_instance(const McData& data, double z) {
  Instance inst;
  inst.a0 = Matrix::Zero(data.n, data.p);
  const int m = 2 * static_cast<int>(data.observations.size());
  AuxVar delta;
  delta.obj = 1.0;
  delta.lb = 0.0;
  delta.row_coeffs = Vector::Zero(m);
  int row = 0;
  for (const auto& obs : data.observations) {
    Matrix cell = Matrix::Zero(data.n, data.p);
    cell(obs.i, obs.j) = 1.0;
    Constraint lower;  // X_ij + delta >= A_ij
    lower.a = cell;
    lower.bl = obs.value;
    delta.row_coeffs(row++) = 1.0;
    Constraint upper;  // X_ij - delta <= A_ij
    upper.a = cell;
    upper.bu = obs.value;
    inst.constraints.push_back(lower);
    inst.constraints.push_back(upper);
    delta.row_coeffs(row++) = -1.0;
  }
  inst.aux_vars.push_back(delta);
  inst.domain = DomainSet::make(MatrixSpace::nonsym(data.n, data.p),
                                std::min(data.k, data.n), 1,
                                SpectralFunction::nuclear_ball(z));
  inst.planted = Matrix::Zero(data.n, data.p);  // X = 0 with elastic delta
  return inst;
}

McResult solve_matrix_completion(const McData& data, double delta_lb,
                                 const SolveOptions& options) {
  Matrix observed = Matrix::Zero(data.n, data.p);
  for (const auto& obs : data.observations) observed(obs.i, obs.j) = obs.value;
  double z_hi = sorted_svd(observed).values.sum();
  double z_lo = 0.0;
  double z_prev = 0.0;
  ColumnPool pool;
  bool have_pool = false;

  McResult result;
  while (z_hi - z_lo > 1e-4) {
    const double z = 0.5 * (z_hi + z_lo);
    Instance inner = mc_inner_instance(data, z);
    ColumnPool next;
    Solution sol;
    if (have_pool && z_prev > 0.0) {
      ColumnPool scaled = pool;
      const double factor = z / z_prev;
      for (auto& pt : scaled.points) pt *= factor;
      inner.planted.reset();
      sol = solve_lsopr(inner, options, &scaled, &next);
    } else {
      sol = solve_lsopr(inner, options, nullptr, &next);
    }
    ++result.bisection_steps;
    if (sol.status != SolveStatus::Optimal) {
      z_lo = z;  // treat solver trouble as infeasible at this level
      continue;
    }
    pool = next;
    have_pool = true;
    z_prev = z;
    const double residual = sol.aux_values(0);
    if (residual >= delta_lb) {
      z_lo = z;
    } else {
      z_hi = z;
      result.x = sol.x;
      result.residual = residual;
    }
  }

  Instance final_inst = mc_inner_instance(data, z_hi);
  Solution final_sol = solve_lsopr(final_inst, options);
  result.z = z_hi;
  result.x = final_sol.x;
  result.residual = final_sol.aux_values(0);
  ReduceOptions ropts;
  ropts.rank_tol = options.rank_tol;
  result.reduced = reduce_rank(final_sol, final_inst, ropts);
  return result;
}

GeneratedInstance tightness_fixture(SpaceKind space, int k, int r, int n) {
  if (r < k) throw DomainError("tightness_fixture: need r >= k");
  const int rr = r - k;  // corner width minus one
  if (n <= 0) n = r + 1;
  if (n < r) throw DomainError("tightness_fixture: need n >= r");

  GeneratedInstance out;
  Instance& inst = out.instance;
  const bool nonsym = space == SpaceKind::NonSym;
  const MatrixSpace ms = nonsym ? MatrixSpace::nonsym(n, n)
                                : (space == SpaceKind::Psd ? MatrixSpace::psd(n)
                                                           : MatrixSpace::sym(n));
  // Corner rows: X_ii = 1/(rr+1) for i in [rr], X_ij = 0 for i<j in [rr+1].
  for (int i = 0; i < rr; ++i) {
    Matrix a = Matrix::Zero(n, n);
    a(i, i) = 1.0;
    inst.constraints.push_back({a, 1.0 / (rr + 1), 1.0 / (rr + 1)});
  }
  for (int i = 0; i < rr + 1; ++i) {
    for (int j = i + 1; j < rr + 1; ++j) {
      Matrix a = Matrix::Zero(n, n);
      if (nonsym) {
        a(i, j) = 1.0;
      } else {
        a(i, j) = a(j, i) = 0.5;
      }
      inst.constraints.push_back({a, 0.0, 0.0});
    }
  }
  Matrix planted = Matrix::Zero(n, n);
  for (int i = 0; i < rr + 1; ++i) planted(i, i) = 1.0 / (rr + 1);
  for (int i = rr + 1; i < r; ++i) planted(i, i) = 1.0;
  inst.a0 = -planted;
  inst.domain = DomainSet::make(ms, k, SpectralFunction::spectral_norm_ball(1.0));
  inst.planted = planted;
  out.planted = planted;
  return out;
}

GeneratedInstance tightness_fixture_diag(int k, int m, int n) {
  if (n <= 0) n = m + k + 1;
  if (n < m + k) throw DomainError("tightness_fixture_diag: need n >= m + k");
  GeneratedInstance out;
  Instance& inst = out.instance;
  for (int i = 0; i < m; ++i) {
    Matrix a = Matrix::Zero(n, n);
    a(i, i) = 1.0;
    inst.constraints.push_back({a, 1.0 / (m + 1), 1.0 / (m + 1)});
  }
  Matrix planted = Matrix::Zero(n, n);
  for (int i = 0; i < m + 1; ++i) planted(i, i) = 1.0 / (m + 1);
  for (int i = m + 1; i < m + k; ++i) planted(i, i) = 1.0;
  inst.a0 = -planted;
  inst.domain = DomainSet::make(MatrixSpace::diag(n), k, SpectralFunction::spectral_norm_ball(1.0));
  inst.planted = planted;
  out.planted = planted;
  return out;
}

}  // namespace lsopr
