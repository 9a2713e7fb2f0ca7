#include <doctest.h>

#include <cmath>

#include "lsopr/apps.hpp"
#include "lsopr/colgen.hpp"
#include "lsopr/oracle.hpp"
#include "lsopr/rng.hpp"

using namespace lsopr;

namespace {

Matrix random_symmetric(SplitMix64& rng, int n) {
  Matrix a = rng.normal_matrix(n, n);
  return 0.5 * (a + a.transpose());
}

bool non_increasing(const std::vector<double>& v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] + slack) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("no rows: one pricing call decides the objective") {
  SplitMix64 rng(701);
  Instance inst;
  inst.a0 = random_symmetric(rng, 4);
  inst.domain = DomainSet::make(MatrixSpace::psd(4), 2, SpectralFunction::trace_box(0.0, 1.5));
  const Solution sol = solve_lsopr(inst);
  REQUIRE(sol.status == SolveStatus::Optimal);
  const PricingOutcome priced = pricing_matrix(-inst.a0, inst.domain);
  CHECK(sol.objective == doctest::Approx(-priced.value).epsilon(1e-9));
}

TEST_CASE("generated instances solve with a certified gap") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GeneratedInstance gen = gen_mimo(10, 3, 2, seed);
    SolveOptions opts;
    opts.epsilon = 1e-4;
    const Solution sol = solve_lsopr(gen.instance, opts);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(non_increasing(sol.objective_history, 1e-9));
    CHECK(sol.gap <= 1e-4 + 1e-9);
    CHECK(sol.gap >= -1e-8);
    Vector no_aux;
    CHECK(gen.instance.row_violation(sol.x, no_aux) <= 1e-7);
    REQUIRE(sol.certificate.has_value());
    CHECK(sol.certificate->f_value <= 1e-8);
    // the planted point bounds the relaxation from above
    const double planted_obj = frobenius_inner(gen.instance.a0, gen.planted);
    CHECK(sol.objective <= planted_obj + 1e-6);
  }
}

TEST_CASE("diagonal instance matches the support-enumeration reference") {
  SplitMix64 rng(709);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 8, k = 2;
    Instance inst;
    Matrix a0 = Matrix::Zero(n, n);
    a0.diagonal() = rng.normal_vector(n);
    inst.a0 = a0;
    // ktilde = 1 via the nuclear ball, so mtilde <= k - ktilde = 1 is exact.
    inst.domain = DomainSet::make(MatrixSpace::diag(n), k, SpectralFunction::nuclear_ball(1.5));
    Matrix r1 = Matrix::Zero(n, n);
    r1.diagonal() = rng.normal_vector(n);
    inst.constraints.push_back({r1, -0.4, 0.4});
    const Solution sol = solve_lsopr(inst);
    REQUIRE(sol.status == SolveStatus::Optimal);
    const double ref = oracle::brute_lsop_diag(inst);
    CHECK(sol.objective <= ref + 1e-6);          // relaxation lower-bounds the original
    CHECK(sol.objective >= ref - 1e-4 - 1e-6);   // exactness at mtilde <= k - ktilde
  }
}

TEST_CASE("initial columns") {
  SUBCASE("planted point is used directly") {
    const GeneratedInstance gen = gen_mimo(6, 2, 2, 3);
    const auto cols = initial_columns(gen.instance);
    REQUIRE(cols.size() == 1);
    CHECK((cols[0] - gen.planted).norm() <= 1e-12);
  }
  SUBCASE("m = 0 uses a pricing output") {
    SplitMix64 rng(711);
    Instance inst;
    inst.a0 = random_symmetric(rng, 3);
    inst.domain = DomainSet::make(MatrixSpace::psd(3), 1, SpectralFunction::trace_box(0.0, 1.0));
    const auto cols = initial_columns(inst);
    REQUIRE(cols.size() == 1);
    CHECK(is_member_domain(cols[0], inst.domain));
  }
  SUBCASE("contradictory rows are infeasible") {
    Instance inst;
    inst.a0 = Matrix::Identity(3, 3);
    inst.domain = DomainSet::make(MatrixSpace::psd(3), 1, SpectralFunction::trace_box(0.0, 1.0));
    Constraint row;
    row.a = Matrix::Identity(3, 3);
    row.bl = 2.0;  // trace of any member is at most 1
    inst.constraints.push_back(row);
    CHECK(initial_columns(inst).empty());
    CHECK(solve_lsopr(inst).status == SolveStatus::Infeasible);
  }
}

TEST_CASE("phase-1 feeds a solvable pool when no planted point exists") {
  const GeneratedInstance gen = gen_mimo(8, 3, 2, 17);
  Instance inst = gen.instance;
  inst.planted.reset();
  const Solution sol = solve_lsopr(inst);
  REQUIRE(sol.status == SolveStatus::Optimal);
  const Solution planted_sol = solve_lsopr(gen.instance);
  CHECK(sol.objective == doctest::Approx(planted_sol.objective).epsilon(2e-4));
}

TEST_CASE("branch solver on symmetric indefinite trace bands") {
  SplitMix64 rng(719);
  SUBCASE("ktilde = 1 gives two branches") {
    Instance inst;
    const int n = 3;
    inst.a0 = random_symmetric(rng, n);
    inst.domain = DomainSet::make(MatrixSpace::sym(n), 1, SpectralFunction::trace_box(-1.0, 1.0));
    const Solution sol = solve_lsopr_indef(inst);
    REQUIRE(sol.status == SolveStatus::Optimal);
    REQUIRE(sol.branch.has_value());
    CHECK(*sol.branch >= 1);
    CHECK(*sol.branch <= 2);
  }
  SUBCASE("tiny instances match the rank-one grid reference") {
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 3;
      Instance inst;
      inst.a0 = random_symmetric(rng, n);
      inst.domain =
          DomainSet::make(MatrixSpace::sym(n), 1, SpectralFunction::trace_box(-1.0, 1.0));
      Matrix a = random_symmetric(rng, n);
      inst.constraints.push_back({a, -2.0, 2.0});
      const Solution indef = solve_lsopr_indef(inst);
      REQUIRE(indef.status == SolveStatus::Optimal);
      const double ref = oracle::brute_rank1_grid(inst);
      // V_rel-I <= V_opt and, at mtilde <= 1, the relaxation is exact.
      CHECK(indef.objective <= ref + 1e-3);
      CHECK(indef.objective >= ref - 1e-3 - 1e-4);
    }
  }
  SUBCASE("sign-invariant functions give matching values on exact instances") {
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 4;
      Instance inst;
      inst.a0 = random_symmetric(rng, n);
      inst.domain = DomainSet::make(MatrixSpace::sym(n), 2, SpectralFunction::lp_ball(2.0, 1.0));
      Matrix a = random_symmetric(rng, n);
      inst.constraints.push_back({a, -0.3, 0.3});
      const Solution plain = solve_lsopr(inst);
      const Solution indef = solve_lsopr_indef(inst);
      REQUIRE(plain.status == SolveStatus::Optimal);
      REQUIRE(indef.status == SolveStatus::Optimal);
      CHECK(plain.objective <= indef.objective + 1e-6);  // relaxation ordering
      CHECK(indef.objective <= plain.objective + 2e-4);  // exact at mtilde <= 1
    }
  }
}

TEST_CASE("directions absorb unbounded pricing") {
  // Middle branches of a symmetric trace band have recession directions; the
  // branch solver must pool them and settle on a legitimate outcome.
  SplitMix64 rng(727);
  const int n = 4;
  Instance inst;
  inst.a0 = random_symmetric(rng, n);
  inst.domain = DomainSet::make(MatrixSpace::sym(n), 2, SpectralFunction::trace_box(-1.0, 1.0));
  for (int i = 0; i < 3; ++i) {
    Matrix a = random_symmetric(rng, n);
    inst.constraints.push_back({a, -0.5, 0.5});
  }
  const Solution sol = solve_lsopr_indef(inst);
  CHECK((sol.status == SolveStatus::Optimal || sol.status == SolveStatus::Unbounded));
}
