#include <doctest.h>

#include <cmath>

#include "lsopr/hull.hpp"
#include "lsopr/rng.hpp"

using namespace lsopr;

namespace {

Matrix random_symmetric(SplitMix64& rng, int n) {
  Matrix a = rng.normal_matrix(n, n);
  return 0.5 * (a + a.transpose());
}

Matrix random_psd_rank(SplitMix64& rng, int n, int r) {
  Matrix g = rng.normal_matrix(n, r);
  return g * g.transpose();
}

bool descending(const Vector& v) {
  for (int i = 0; i + 1 < v.size(); ++i) {
    if (v(i) < v(i + 1) - 1e-10) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("least_concave_majorant basics") {
  Vector b(4);
  b << 0.0, 2.0, 2.5, 3.0;  // already concave
  CHECK((least_concave_majorant(b) - b).cwiseAbs().maxCoeff() <= 1e-14);

  Vector c(4);
  c << 0.0, 0.5, 2.5, 3.0;  // convex kink gets bridged
  const Vector h = least_concave_majorant(c);
  CHECK(h(0) == doctest::Approx(0.0));
  CHECK(h(3) == doctest::Approx(3.0));
  for (int i = 0; i < 4; ++i) CHECK(h(i) >= c(i) - 1e-14);
  for (int i = 1; i + 1 < 4; ++i) CHECK(h(i + 1) - h(i) <= h(i) - h(i - 1) + 1e-12);
}

TEST_CASE("certificate of a low-rank member is its spectrum") {
  SplitMix64 rng(211);
  const int n = 5, ktilde = 2;
  Matrix x = random_psd_rank(rng, n, ktilde);
  x *= 2.0 / x.trace();
  const DomainSet d = DomainSet::make(MatrixSpace::psd(n), 3, ktilde,
                                      SpectralFunction::trace_box(0.0, 2.0));
  auto cert = hull_certificate(x, d);
  REQUIRE(cert.has_value());
  const Vector lam = sorted_eigs(x).values;
  CHECK((cert->x - lam).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(cert->f_value == doctest::Approx(d.f.eval(lam)).epsilon(1e-10));
}

TEST_CASE("nuclear-ball certificate concentrates the mass") {
  SplitMix64 rng(223);
  const int n = 5;
  Matrix x = random_psd_rank(rng, n, 2);  // rank ktilde + 1 with ktilde = 1
  const double nuc = sorted_eigs(x).values.sum();
  const DomainSet d =
      DomainSet::make(MatrixSpace::psd(n), 3, SpectralFunction::nuclear_ball(nuc));
  REQUIRE(d.ktilde == 1);
  auto cert = hull_certificate(x, d);
  REQUIRE(cert.has_value());
  CHECK(cert->x(0) == doctest::Approx(nuc).epsilon(1e-10));
  CHECK(cert->x.tail(n - 1).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(cert->f_value == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("certificates satisfy their pattern and majorization") {
  SplitMix64 rng(227);
  SUBCASE("psd: exact majorization, nonnegative support") {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 5, ktilde = 2;
      const Matrix x = random_psd_rank(rng, n, 4);
      const DomainSet d = DomainSet::make(MatrixSpace::psd(n), ktilde,
                                          SpectralFunction::frobenius_sq(4.0));
      auto cert = hull_certificate(x, d);
      REQUIRE(cert.has_value());
      CHECK(descending(cert->x));
      CHECK(cert->x.minCoeff() >= -1e-10);
      CHECK(cert->x.tail(n - ktilde).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(majorizes(cert->x, sorted_eigs(x).values, false, 1e-8));
    }
  }
  SUBCASE("nonsym: weak majorization") {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 4, p = 6, ktilde = 2;
      const Matrix x = rng.normal_matrix(n, p);
      const DomainSet d = DomainSet::make(MatrixSpace::nonsym(n, p), ktilde,
                                          SpectralFunction::spectral_norm_ball(1.0));
      auto cert = hull_certificate(x, d);
      REQUIRE(cert.has_value());
      CHECK(descending(cert->x));
      CHECK(cert->x.minCoeff() >= -1e-10);
      Vector sigma_padded = Vector::Zero(n);
      sigma_padded.head(n) = sorted_svd(x).values;
      CHECK(majorizes(cert->x.head(n), sigma_padded, true, 1e-8));
    }
  }
  SUBCASE("sym indefinite: branch pattern re-validated") {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 5, k = 2;
      const Matrix x = random_symmetric(rng, n);
      const DomainSet d =
          DomainSet::make(MatrixSpace::sym(n), k, SpectralFunction::trace_box(-10.0, 10.0));
      auto cert = hull_certificate(x, d);
      REQUIRE(cert.has_value());
      REQUIRE(cert->branch.has_value());
      const int s = *cert->branch;
      CHECK(descending(cert->x));
      for (int pos = s; pos <= s + n - d.ktilde - 1; ++pos) {
        CHECK(std::abs(cert->x(pos - 1)) <= 1e-10);
      }
      CHECK(majorizes(cert->x, sorted_eigs(x).values, false, 1e-8));
    }
  }
}

TEST_CASE("is_in_hull membership") {
  SplitMix64 rng(229);
  const int n = 5, k = 2;
  const DomainSet d =
      DomainSet::make(MatrixSpace::psd(n), k, SpectralFunction::trace_box(0.0, 3.0));

  SUBCASE("members and their midpoints stay inside") {
    for (int trial = 0; trial < 100; ++trial) {
      Matrix a = random_psd_rank(rng, n, k);
      a *= (3.0 * rng.next_uniform()) / a.trace();
      Matrix b = random_psd_rank(rng, n, k);
      b *= (3.0 * rng.next_uniform()) / b.trace();
      CHECK(is_in_hull(a, d));
      CHECK(is_in_hull(b, d));
      const double t = rng.next_uniform();
      CHECK(is_in_hull(t * a + (1.0 - t) * b, d));
    }
  }
  SUBCASE("trace above U is outside") {
    Matrix x = random_psd_rank(rng, n, k);
    x *= 3.5 / x.trace();
    CHECK_FALSE(is_in_hull(x, d));
  }
  SUBCASE("binding constraint flips on perturbation") {
    Matrix x = random_psd_rank(rng, n, k);
    x *= 3.0 / x.trace();  // trace exactly at U
    CHECK(is_in_hull(x, d));
    CHECK_FALSE(is_in_hull(1.001 * x, d));
  }
}

TEST_CASE("sym members admit a branch certificate") {
  // D is covered by the union of the branch sets: every member certifies.
  SplitMix64 rng(233);
  const int n = 5, k = 2;
  const DomainSet d =
      DomainSet::make(MatrixSpace::sym(n), k, SpectralFunction::trace_box(-2.0, 2.0));
  for (int trial = 0; trial < 100; ++trial) {
    Vector lam = Vector::Zero(n);
    lam(0) = 2.0 * rng.next_uniform() - 1.0;
    lam(1) = 2.0 * rng.next_uniform() - 1.0;
    const double tr = lam.sum();
    if (tr < -2.0 || tr > 2.0) continue;
    Matrix basis = rng.normal_matrix(n, n);
    Eigen::HouseholderQR<Matrix> qr(basis);
    Matrix q = qr.householderQ();
    const Matrix x = q * lam.asDiagonal() * q.transpose();
    auto cert = hull_certificate(x, d);
    REQUIRE(cert.has_value());
    CHECK(cert->f_value <= 1e-8);
  }
}

TEST_CASE("diag space certificates") {
  const int n = 5, k = 2;
  Matrix x = Matrix::Zero(n, n);
  x(0, 0) = 1.0;
  x(1, 1) = 0.5;
  x(2, 2) = -0.25;
  const DomainSet sign_inv =
      DomainSet::make(MatrixSpace::diag(n), k, SpectralFunction::nuclear_ball(1.75));
  CHECK(is_in_hull(x, sign_inv));
  const DomainSet tight =
      DomainSet::make(MatrixSpace::diag(n), k, SpectralFunction::nuclear_ball(1.6));
  CHECK_FALSE(is_in_hull(x, tight));
}
