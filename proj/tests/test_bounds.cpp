#include <doctest.h>

#include "lsopr/bounds.hpp"
#include "lsopr/rng.hpp"

using namespace lsopr;

TEST_CASE("count_independent") {
  Matrix a = Matrix::Identity(3, 3);
  CHECK(count_independent({a, 2.0 * a}) == 1);
  CHECK(count_independent({}) == 0);

  SplitMix64 rng(601);
  std::vector<Matrix> dense;
  for (int i = 0; i < 5; ++i) dense.push_back(rng.normal_matrix(4, 4));
  CHECK(count_independent(dense) == 5);
  // Gram determinant cross-check: the Gram matrix of vectorized constraints
  // is nonsingular exactly when they are independent.
  Matrix gram(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) gram(i, j) = frobenius_inner(dense[i], dense[j]);
  CHECK(std::abs(gram.determinant()) > 1e-6);
}

TEST_CASE("rank_bound closed forms") {
  CHECK(rank_bound(SpaceKind::Psd, true, false, 5, 5) == 7);
  CHECK(rank_bound(SpaceKind::Psd, true, false, 1, 50) == 9);
  CHECK(rank_bound(SpaceKind::Diag, false, true, 2, 3) == 5);
  CHECK(rank_bound(SpaceKind::NonSym, true, false, 3, 4) == 4);
}

TEST_CASE("rank_bound reproduces the published tables") {
  // trace/log-det experiments: (m, k) rows with ktilde = k, mtilde = m.
  const int t2_m[12] = {5, 10, 10, 10, 15, 15, 15, 20, 25, 25, 50, 50};
  const int t2_k[12] = {5, 5, 10, 10, 10, 15, 15, 15, 25, 25, 25, 50};
  const int t2_bound[12] = {7, 8, 13, 13, 14, 19, 19, 20, 30, 30, 33, 58};
  for (int i = 0; i < 12; ++i) {
    CHECK(rank_bound(SpaceKind::Psd, false, false, t2_k[i], t2_m[i]) == t2_bound[i]);
  }
  // trace-band k = 1 experiments.
  const int t3_m[8] = {50, 60, 60, 75, 75, 90, 90, 100};
  const int t3_bound[8] = {9, 10, 10, 11, 11, 13, 13, 13};
  for (int i = 0; i < 8; ++i) {
    CHECK(rank_bound(SpaceKind::Psd, false, false, 1, t3_m[i]) == t3_bound[i]);
  }
  // matrix completion: bound by omega.
  const int t4_omega[6] = {30, 40, 50, 60, 70, 80};
  const int t4_bound[6] = {7, 8, 9, 10, 11, 12};
  for (int i = 0; i < 6; ++i) {
    AppParams params;
    params.omega = t4_omega[i];
    CHECK(app_bound(AppKind::MatrixCompletion, params) == t4_bound[i]);
  }
}

TEST_CASE("app bounds") {
  AppParams params;
  params.omega = 30;
  CHECK(app_bound(AppKind::MatrixCompletion, params) == 7);
  params.omega = 80;
  CHECK(app_bound(AppKind::MatrixCompletion, params) == 12);

  AppParams qcqp;
  qcqp.mtilde = 2;
  CHECK(app_bound(AppKind::Qcqp, qcqp) == 1);
  qcqp.mtilde = 3;
  CHECK(app_bound(AppKind::Qcqp, qcqp) == 2);
  qcqp.mtilde = 0;
  CHECK(app_bound(AppKind::Qcqp, qcqp) == 0);

  AppParams ridge;
  ridge.k = 3;
  ridge.rank_a = 4;
  CHECK(app_bound(AppKind::SparseRidge, ridge) == 7);

  AppParams pca;
  pca.k = 2;
  pca.m = 2;
  CHECK(app_bound(AppKind::FairPca, pca) == 2);  // m <= 2 keeps the bound at k
  pca.m = 3;
  CHECK(app_bound(AppKind::FairPca, pca) == 3);
}

TEST_CASE("exactness conditions") {
  // psd with k = ktilde: exact iff mtilde <= 1
  CHECK(exactness_holds(SpaceKind::Psd, false, false, 3, 3, 1));
  CHECK_FALSE(exactness_holds(SpaceKind::Psd, false, false, 3, 3, 2));
  // sym non-sign-invariant, k = ktilde: exact iff mtilde <= 1
  CHECK(exactness_holds(SpaceKind::Sym, false, false, 2, 2, 1));
  CHECK_FALSE(exactness_holds(SpaceKind::Sym, false, false, 2, 2, 2));
  // diag: linear
  CHECK(exactness_holds(SpaceKind::Diag, true, true, 3, 1, 2));
  CHECK_FALSE(exactness_holds(SpaceKind::Diag, true, true, 3, 1, 3));
}

TEST_CASE("bound properties: monotone and consistent") {
  for (int kt = 1; kt <= 4; ++kt) {
    for (int mt = 0; mt <= 40; ++mt) {
      for (int variant = 0; variant < 3; ++variant) {
        const SpaceKind space = variant == 0   ? SpaceKind::Psd
                                : variant == 1 ? SpaceKind::Sym
                                               : SpaceKind::Diag;
        const bool sign_inv = variant != 1;
        const bool diag = variant == 2;
        const int b = rank_bound(space, sign_inv, diag, kt, mt);
        CHECK(b >= kt);
        CHECK(rank_bound(space, sign_inv, diag, kt, mt + 1) >= b);
        CHECK(rank_bound(space, sign_inv, diag, kt + 1, mt) >= b);
        for (int k = kt; k <= kt + 5; ++k) {
          if (exactness_holds(space, sign_inv, diag, k, kt, mt)) {
            CHECK(rank_bound(space, sign_inv, diag, kt, mt) <= k);
          }
        }
      }
    }
  }
}
