#include "lsopr/bounds.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "lsopr/instance.hpp"

namespace lsopr {

namespace {

long long isqrt_ll(long long x) {
  if (x < 0) return 0;
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// floor(sqrt(2 m + 9/4) - 3/2) evaluated exactly: largest j with
// (2j+3)^2 <= 8m + 9.
int pataki_floor(int m) {
  const long long u = isqrt_ll(8LL * m + 9);
  return static_cast<int>((u - 3) / 2);
}

}  // namespace

int count_independent(const std::vector<Matrix>& constraints, double rel_tol) {
  if (constraints.empty()) return 0;
  const int cells = static_cast<int>(constraints.front().size());
  Matrix stacked(static_cast<int>(constraints.size()), cells);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    stacked.row(static_cast<int>(i)) =
        Eigen::Map<const Vector>(constraints[i].data(), cells).transpose();
  }
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const Vector sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

int rank_bound(SpaceKind space, bool sign_invariant, bool diag, int ktilde, int mtilde) {
  if (diag || space == SpaceKind::Diag) return ktilde + mtilde;
  if (space == SpaceKind::Sym && !sign_invariant) {
    return ktilde + static_cast<int>(isqrt_ll(4LL * mtilde + 9)) - 3;
  }
  return ktilde + pataki_floor(mtilde);
}

int app_bound(AppKind app, const AppParams& params) {
  switch (app) {
    case AppKind::Kernel:
      return params.k + pataki_floor(params.mtilde);
    case AppKind::FairPca:
    case AppKind::FairSvd: {
      // floor(sqrt(2 m + 1/4) - 3/2): largest j with (2j+3)^2 <= 8m + 1.
      const long long u = isqrt_ll(8LL * params.m + 1);
      return params.k + static_cast<int>((u - 3) / 2);
    }
    case AppKind::Qcqp: {
      // Largest r with r (r+1) / 2 <= mtilde.
      int r = 0;
      while ((r + 1LL) * (r + 2) / 2 <= params.mtilde) ++r;
      return r;
    }
    case AppKind::MatrixCompletion: {
      // floor(sqrt(2 |Omega| + 9/4) - 1/2): largest j with (2j+1)^2 <= 8|Omega| + 9.
      const long long u = isqrt_ll(8LL * params.omega + 9);
      return static_cast<int>((u - 1) / 2);
    }
    case AppKind::SparseRidge:
      return params.k + params.rank_a;
  }
  return 0;
}

bool exactness_holds(SpaceKind space, bool sign_invariant, bool diag, int k, int ktilde,
                     int mtilde) {
  const long long gap = k - ktilde;
  if (diag || space == SpaceKind::Diag) return mtilde <= gap;
  if (space == SpaceKind::Sym && !sign_invariant) {
    const bool printed = 4LL * mtilde <= (gap + 3) * (gap + 5) - 8;
    return printed && rank_bound(space, sign_invariant, diag, ktilde, mtilde) <= k;
  }
  return 2LL * mtilde <= (gap + 2) * (gap + 3) - 4;
}

BoundReport bound_report(SpaceKind space, bool sign_invariant, bool diag, int k, int ktilde,
                         int m, int mtilde) {
  BoundReport report;
  report.space = space;
  report.sign_invariant = sign_invariant;
  report.k = k;
  report.ktilde = ktilde;
  report.m = m;
  report.mtilde = mtilde;
  report.bound = rank_bound(space, sign_invariant, diag, ktilde, mtilde);
  report.exactness = exactness_holds(space, sign_invariant, diag, k, ktilde, mtilde);
  if (diag || space == SpaceKind::Diag) {
    report.formula_id = "ktilde+mtilde";
  } else if (space == SpaceKind::Sym && !sign_invariant) {
    report.formula_id = "ktilde+floor(sqrt(4mt+9))-3";
  } else {
    report.formula_id = "ktilde+floor(sqrt(2mt+9/4)-3/2)";
  }
  return report;
}

BoundReport bound_report(const Instance& instance) {
  std::vector<Matrix> mats;
  for (const auto& c : instance.constraints) mats.push_back(c.a);
  const DomainSet& d = instance.domain;
  return bound_report(d.space.kind, d.f.sign_invariant(), d.space.kind == SpaceKind::Diag,
                      d.k, d.ktilde, instance.num_rows(), count_independent(mats));
}

}  // namespace lsopr
