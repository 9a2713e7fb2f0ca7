#include <doctest.h>

#include <cmath>

#include "lsopr/apps.hpp"
#include "lsopr/bounds.hpp"
#include "lsopr/rankreduce.hpp"
#include "lsopr/rng.hpp"

using namespace lsopr;

namespace {

Matrix random_symmetric(SplitMix64& rng, int n) {
  Matrix a = rng.normal_matrix(n, n);
  return 0.5 * (a + a.transpose());
}

ReductionState make_state(const Matrix& x, const Instance& inst) {
  ReductionState state;
  state.x = x;
  state.spectrum = domain_spectrum(x, inst.domain);
  auto cert = spectrum_certificate(state.spectrum, inst.domain);
  REQUIRE(cert.has_value());
  state.certificate = *cert;
  state.rank = numeric_rank(state.spectrum);
  return state;
}

}  // namespace

TEST_CASE("build_direction residuals on a psd state") {
  SplitMix64 rng(801);
  const int n = 5, ktilde = 2;
  Matrix g = rng.normal_matrix(n, 4);
  Matrix x = g * g.transpose();  // rank 4: window size r - ktilde + 1 = 3
  x *= 2.0 / x.trace();
  Instance inst;
  inst.a0 = random_symmetric(rng, n);
  inst.domain =
      DomainSet::make(MatrixSpace::psd(n), ktilde, SpectralFunction::trace_box(0.0, 2.0));
  inst.constraints.push_back({random_symmetric(rng, n), -1.0, 1.0});

  const ReductionState state = make_state(x, inst);
  auto y = build_direction(state, inst);
  REQUIRE(y.has_value());
  CHECK(std::abs(frobenius_inner(inst.constraints[0].a, *y)) <= 1e-8);
  CHECK(std::abs(y->trace()) <= 1e-8);
  CHECK(frobenius_inner(inst.a0, *y) <= 1e-12);
  CHECK((*y - y->transpose()).norm() <= 1e-10);
}

TEST_CASE("build_direction returns none when constraints span") {
  SplitMix64 rng(809);
  const int n = 4, ktilde = 2;
  Matrix g = rng.normal_matrix(n, 3);
  Matrix x = g * g.transpose();
  x *= 1.5 / x.trace();
  Instance inst;
  inst.a0 = random_symmetric(rng, n);
  inst.domain =
      DomainSet::make(MatrixSpace::psd(n), ktilde, SpectralFunction::trace_box(0.0, 1.5));
  // Window is 2x2: the symmetric space has dimension 3; trace uses one,
  // so two generic rows close the null space entirely.
  for (int i = 0; i < 5; ++i) inst.constraints.push_back({random_symmetric(rng, n), -1.0, 1.0});
  const ReductionState state = make_state(x, inst);
  CHECK_FALSE(build_direction(state, inst).has_value());
}

TEST_CASE("build_direction none when rank is at ktilde") {
  SplitMix64 rng(811);
  const int n = 4, ktilde = 2;
  Matrix g = rng.normal_matrix(n, ktilde);
  Matrix x = g * g.transpose();
  x *= 1.0 / x.trace();
  Instance inst;
  inst.a0 = random_symmetric(rng, n);
  inst.domain =
      DomainSet::make(MatrixSpace::psd(n), ktilde, SpectralFunction::trace_box(0.0, 1.0));
  const ReductionState state = make_state(x, inst);
  // Window has a single entry; the trace-zero constraint kills it.
  CHECK_FALSE(build_direction(state, inst).has_value());
}

TEST_CASE("max_step analytic boundary") {
  // X = diag(3, 1, 1), ktilde = 2: the window holds (1, 1) and the only row
  // pins the window's off-diagonal, leaving Delta = diag(1,-1)/sqrt(2).
  // The sign constraint gives delta <= sqrt(2).
  const int n = 3;
  Matrix x = Matrix::Zero(n, n);
  x(0, 0) = 3.0;
  x(1, 1) = 1.0;
  x(2, 2) = 1.0;
  Instance inst;
  inst.a0 = Matrix::Identity(n, n);  // objective-neutral on trace-free moves
  inst.domain =
      DomainSet::make(MatrixSpace::psd(n), 2, SpectralFunction::trace_box(0.0, 5.0));
  Matrix offdiag = Matrix::Zero(n, n);
  offdiag(1, 2) = offdiag(2, 1) = 1.0;
  inst.constraints.push_back({offdiag, 0.0, 0.0});

  const ReductionState state = make_state(x, inst);
  auto y = build_direction(state, inst);
  REQUIRE(y.has_value());
  const double delta = max_step(state, *y, inst);
  CHECK(delta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  // one window eigenvalue reaches zero at the step
  const Vector lam = sorted_eigs(state.x + delta * *y).values;
  CHECK(std::abs(lam(n - 1)) <= 1e-9);
}

TEST_CASE("reduce_rank on generated instances") {
  for (std::uint64_t seed = 2; seed <= 6; ++seed) {
    const GeneratedInstance gen = gen_mimo(10, 4, 3, seed);
    const Solution sol = solve_lsopr(gen.instance);
    REQUIRE(sol.status == SolveStatus::Optimal);
    const Solution red = reduce_rank(sol, gen.instance);
    const BoundReport bounds = bound_report(gen.instance);
    CHECK(red.rank <= bounds.bound);
    CHECK(red.objective <= sol.objective + 1e-9);
    Vector no_aux;
    CHECK(gen.instance.row_violation(red.x, no_aux) <= 1e-7);
    // rows are preserved exactly along the walk
    const Vector before = gen.instance.row_values(sol.x);
    const Vector after = gen.instance.row_values(red.x);
    CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(std::abs(red.x.trace() - sol.x.trace()) <= 1e-9);
  }
}

TEST_CASE("reduce_rank leaves an extreme point unchanged") {
  const GeneratedInstance fx = tightness_fixture(SpaceKind::Psd, 1, 2);
  Solution planted_sol;
  planted_sol.x = fx.planted;
  planted_sol.objective = frobenius_inner(fx.instance.a0, fx.planted);
  planted_sol.rank = numeric_rank_of(fx.planted);
  const Solution red = reduce_rank(planted_sol, fx.instance);
  CHECK((red.x - fx.planted).norm() <= 1e-12);
  CHECK(red.rank == planted_sol.rank);
}

TEST_CASE("matrix-completion reduction drops rank every iteration") {
  const McData data = gen_matrix_completion(12, 10, 3, 12, 1e-4, 5);
  SolveOptions opts;
  const McResult res = solve_matrix_completion(data, 1e-4, opts);
  AppParams params;
  params.omega = 12;
  CHECK(res.reduced.rank <= app_bound(AppKind::MatrixCompletion, params));
  CHECK(res.reduced.objective <= res.residual + 1e-9);
}

TEST_CASE("symmetric indefinite reduction holds the branch") {
  SplitMix64 rng(821);
  const int n = 4;
  Instance inst;
  inst.a0 = random_symmetric(rng, n);
  inst.domain = DomainSet::make(MatrixSpace::sym(n), 1, SpectralFunction::trace_box(-1.0, 1.0));
  inst.constraints.push_back({random_symmetric(rng, n), -1.5, 1.5});
  const Solution sol = solve_lsopr_indef(inst);
  REQUIRE(sol.status == SolveStatus::Optimal);
  const Solution red = reduce_rank(sol, inst);
  const BoundReport bounds = bound_report(inst);
  CHECK(red.rank <= bounds.bound);
  CHECK(red.objective <= sol.objective + 1e-9);
  REQUIRE(red.certificate.has_value());
  CHECK(red.certificate->f_value <= 1e-8);
}
