#include "lsopr/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace lsopr {

SpectrumOrdered sorted_eigs(const Matrix& x, double sym_tol) {
  if (x.rows() != x.cols()) {
    throw NonSymmetricError("sorted_eigs: matrix is not square");
  }
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  const double asym = (x - x.transpose()).cwiseAbs().maxCoeff();
  if (asym > sym_tol * scale) {
    throw NonSymmetricError("sorted_eigs: symmetry residual " + std::to_string(asym));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.transpose()));
  const int n = static_cast<int>(x.rows());
  SpectrumOrdered out;
  out.values = es.eigenvalues().reverse();
  out.left_basis = es.eigenvectors().rowwise().reverse();
  out.right_basis = out.left_basis;
  return out;
}

SpectrumOrdered sorted_svd(const Matrix& x) {
  SpectrumOrdered out;
  out.swapped = x.rows() > x.cols();
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.values = svd.singularValues();
  out.left_basis = svd.matrixU();
  out.right_basis = svd.matrixV();
  return out;
}

int numeric_rank(const Vector& values, double tol) {
  int r = 0;
  for (int i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) > tol) ++r;
  }
  return r;
}

int numeric_rank_of(const Matrix& x, double tol) {
  if (x.rows() == x.cols() &&
      (x - x.transpose()).cwiseAbs().maxCoeff() <= Tolerances::symmetry * (1.0 + x.cwiseAbs().maxCoeff())) {
    return numeric_rank(sorted_eigs(x).values, tol);
  }
  return numeric_rank(sorted_svd(x).values, tol);
}

Vector sorted_descending(const Vector& v) {
  Vector s = v;
  std::sort(s.data(), s.data() + s.size(), std::greater<double>());
  return s;
}

Vector prefix_sums(const Vector& v) {
  Vector s(v.size() + 1);
  s(0) = 0.0;
  for (int i = 0; i < v.size(); ++i) s(i + 1) = s(i) + v(i);
  return s;
}

bool majorizes(const Vector& x, const Vector& y, bool weak, double tol) {
  if (x.size() != y.size()) {
    throw DomainError("majorizes: length mismatch");
  }
  const Vector sx = prefix_sums(sorted_descending(x));
  const Vector sy = prefix_sums(sorted_descending(y));
  const int n = static_cast<int>(x.size());
  for (int ell = 1; ell <= n; ++ell) {
    if (sx(ell) < sy(ell) - tol) return false;
  }
  if (!weak && std::abs(sx(n) - sy(n)) > tol) return false;
  return true;
}

double top_ell_sum(const Matrix& x, int ell) {
  const Vector sigma = sorted_svd(x).values;
  if (ell < 1 || ell > sigma.size()) {
    throw DomainError("top_ell_sum: ell out of range");
  }
  return sigma.head(ell).sum();
}

Vector sym_to_vec(const Matrix& s) {
  const int d = static_cast<int>(s.rows());
  Vector v(d * (d + 1) / 2);
  const double rt2 = std::sqrt(2.0);
  int idx = 0;
  for (int i = 0; i < d; ++i) {
    v(idx++) = s(i, i);
    for (int j = i + 1; j < d; ++j) v(idx++) = rt2 * 0.5 * (s(i, j) + s(j, i));
  }
  return v;
}

Matrix vec_to_sym(const Vector& v, int dim) {
  Matrix s(dim, dim);
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  int idx = 0;
  for (int i = 0; i < dim; ++i) {
    s(i, i) = v(idx++);
    for (int j = i + 1; j < dim; ++j) {
      s(i, j) = s(j, i) = inv_rt2 * v(idx++);
    }
  }
  return s;
}

std::optional<Vector> nullspace_unit_vector(const Matrix& rows, int dim, double rel_tol) {
  if (rows.rows() == 0) {
    Vector e = Vector::Zero(dim);
    e(0) = 1.0;
    return e;
  }
  Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
  const Vector sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rel_tol * sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  }
  if (rank >= dim) return std::nullopt;
  Vector v = svd.matrixV().col(rank);
  v.normalize();
  return v;
}

std::optional<Matrix> sym_nullspace_direction(const std::vector<Matrix>& constraints,
                                              double rel_tol) {
  if (constraints.empty()) {
    throw DomainError("sym_nullspace_direction: no constraints (dimension unknown)");
  }
  const int d = static_cast<int>(constraints.front().rows());
  const int vdim = d * (d + 1) / 2;
  Matrix rows(static_cast<int>(constraints.size()), vdim);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    rows.row(static_cast<int>(i)) = sym_to_vec(constraints[i]).transpose();
  }
  auto v = nullspace_unit_vector(rows, vdim, rel_tol);
  if (!v) return std::nullopt;
  // Unit vector in the scaled encoding has unit Frobenius norm as a matrix.
  return vec_to_sym(*v, d);
}

}  // namespace lsopr
