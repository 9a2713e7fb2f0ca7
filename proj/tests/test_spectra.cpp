#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lsopr/oracle.hpp"
#include "lsopr/rng.hpp"
#include "lsopr/spectra.hpp"

using namespace lsopr;

namespace {

Matrix random_symmetric(SplitMix64& rng, int n) {
  Matrix a = rng.normal_matrix(n, n);
  return 0.5 * (a + a.transpose());
}

// Characteristic-polynomial bisection: roots of det(tI - X) located by sign
// changes on a fine grid. Independent of the eigensolver path.
std::vector<double> charpoly_roots(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  auto charpoly = [&](double t) {
    return (t * Matrix::Identity(n, n) - x).determinant();
  };
  const double radius = 1.0 + n * x.cwiseAbs().maxCoeff();
  const int grid = 20000;
  std::vector<double> roots;
  double prev_t = -radius, prev_v = charpoly(prev_t);
  for (int i = 1; i <= grid; ++i) {
    const double t = -radius + 2.0 * radius * i / grid;
    const double v = charpoly(t);
    if ((prev_v <= 0.0 && v > 0.0) || (prev_v >= 0.0 && v < 0.0)) {
      double lo = prev_t, hi = t, flo = prev_v;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = charpoly(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_t = t;
    prev_v = v;
  }
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  return roots;
}

}  // namespace

TEST_CASE("sorted_eigs identity and diagonal permutation") {
  CHECK(sorted_eigs(Matrix::Identity(3, 3)).values.isApprox(Vector::Ones(3)));

  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  d(2, 2) = 2.0;
  const Vector v = sorted_eigs(d).values;
  CHECK(v(0) == doctest::Approx(3.0));
  CHECK(v(1) == doctest::Approx(2.0));
  CHECK(v(2) == doctest::Approx(1.0));
}

TEST_CASE("sorted_eigs rejects non-symmetric input") {
  Matrix x(2, 2);
  x << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(sorted_eigs(x), NonSymmetricError);
}

TEST_CASE("sorted_eigs matches characteristic-polynomial bisection") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = random_symmetric(rng, 4);
    const Vector v = sorted_eigs(x).values;
    const std::vector<double> roots = charpoly_roots(x);
    REQUIRE(roots.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(v(i) == doctest::Approx(roots[i]).epsilon(1e-8));
  }
}

TEST_CASE("decomposition invariants: reconstruction and orthonormality") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = random_symmetric(rng, 6);
    const SpectrumOrdered dec = sorted_eigs(x);
    CHECK((dec.reconstruct() - x).norm() <= 1e-8 * (1.0 + x.norm()));
    CHECK((dec.left_basis.transpose() * dec.left_basis - Matrix::Identity(6, 6)).norm() <= 1e-9);
    for (int i = 0; i + 1 < 6; ++i) CHECK(dec.values(i) >= dec.values(i + 1) - 1e-12);

    const Matrix y = rng.normal_matrix(4, 7);
    const SpectrumOrdered sdec = sorted_svd(y);
    CHECK((sdec.reconstruct() - y).norm() <= 1e-8 * (1.0 + y.norm()));
    CHECK(sdec.values.minCoeff() >= 0.0);
  }
}

TEST_CASE("sorted_svd zero and unit dyad") {
  CHECK(sorted_svd(Matrix::Zero(3, 4)).values.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  SplitMix64 rng(11);
  Vector u = rng.normal_vector(4);
  Vector v = rng.normal_vector(5);
  u.normalize();
  v.normalize();
  const Vector sv = sorted_svd(u * v.transpose()).values;
  CHECK(sv(0) == doctest::Approx(1.0));
  CHECK(sv.tail(3).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("sorted_svd squares match Gram-matrix eigenvalues") {
  SplitMix64 rng(13);
  const Matrix x = rng.normal_matrix(3, 5);
  const Vector sv = sorted_svd(x).values;
  const Vector gram = sorted_eigs(x * x.transpose()).values;
  for (int i = 0; i < 3; ++i) CHECK(sv(i) * sv(i) == doctest::Approx(gram(i)).epsilon(1e-8));
}

TEST_CASE("majorizes hand cases") {
  Vector x(2), y(2);
  x << 1.0, 0.0;
  y << 0.5, 0.5;
  CHECK(majorizes(x, y, false));
  x << 0.6, 0.4;
  y << 0.7, 0.3;
  CHECK_FALSE(majorizes(x, y, false));
}

TEST_CASE("majorizes is reflexive on spectra") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector lam = sorted_eigs(random_symmetric(rng, 5)).values;
    CHECK(majorizes(lam, lam, false));
  }
}

TEST_CASE("majorizes agrees with subset enumeration") {
  SplitMix64 rng(19);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vector x = rng.normal_vector(10);
    const Vector y = rng.normal_vector(10);
    const bool weak = (trial % 2) == 0;
    CHECK(majorizes(x, y, weak) == oracle::brute_majorization(x, y, weak));
  }
}

TEST_CASE("top_ell_sum") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  CHECK(top_ell_sum(d, 1) == doctest::Approx(3.0));

  SplitMix64 rng(23);
  Matrix g = rng.normal_matrix(4, 4);
  Matrix psd = g * g.transpose();
  CHECK(top_ell_sum(psd, 4) == doctest::Approx(psd.trace()).epsilon(1e-9));

  // ell = 2 equals the best pair of singular values.
  const Matrix x = rng.normal_matrix(4, 4);
  const Vector sv = sorted_svd(x).values;
  double best_pair = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) best_pair = std::max(best_pair, sv(i) + sv(j));
  CHECK(top_ell_sum(x, 2) == doctest::Approx(best_pair).epsilon(1e-10));
}

TEST_CASE("symmetric encoding round-trips and preserves inner products") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_symmetric(rng, 5);
    const Matrix b = random_symmetric(rng, 5);
    CHECK((vec_to_sym(sym_to_vec(a), 5) - a).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sym_to_vec(a).dot(sym_to_vec(b)) ==
          doctest::Approx(frobenius_inner(a, b)).epsilon(1e-10));
  }
}

TEST_CASE("sym_nullspace_direction") {
  SUBCASE("trace-zero plane") {
    auto delta = sym_nullspace_direction({Matrix::Identity(2, 2)});
    REQUIRE(delta.has_value());
    CHECK(std::abs(delta->trace()) <= 1e-10);
    CHECK(delta->norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("full span yields none") {
    Matrix e11 = Matrix::Zero(2, 2), e22 = Matrix::Zero(2, 2), e12 = Matrix::Zero(2, 2);
    e11(0, 0) = 1.0;
    e22(1, 1) = 1.0;
    e12(0, 1) = e12(1, 0) = 1.0;
    CHECK_FALSE(sym_nullspace_direction({e11, e22, e12}).has_value());
  }
  SUBCASE("random constraints give small residuals") {
    SplitMix64 rng(31);
    std::vector<Matrix> constraints;
    for (int i = 0; i < 5; ++i) constraints.push_back(random_symmetric(rng, 4));
    auto delta = sym_nullspace_direction(constraints);
    REQUIRE(delta.has_value());
    for (const Matrix& c : constraints) {
      CHECK(std::abs(frobenius_inner(c, *delta)) <= 1e-8);
    }
    CHECK(delta->norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("d=1 with trace constraint has no direction") {
    CHECK_FALSE(sym_nullspace_direction({Matrix::Identity(1, 1)}).has_value());
  }
}

TEST_CASE("Weyl perturbation bound") {
  SplitMix64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = random_symmetric(rng, 5);
    const Matrix delta = random_symmetric(rng, 5);
    const double step = rng.next_uniform();
    const Vector base = sorted_eigs(x).values;
    const Vector moved = sorted_eigs(x + step * delta).values;
    const double radius = step * sorted_eigs(delta).values.cwiseAbs().maxCoeff();
    for (int i = 0; i < 5; ++i) CHECK(std::abs(moved(i) - base(i)) <= radius + 1e-10);
  }
}
