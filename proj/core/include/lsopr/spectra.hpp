#pragma once

#include <optional>
#include <vector>

#include "lsopr/common.hpp"

namespace lsopr {

/// Full spectral decomposition with values sorted in non-increasing order.
/// For symmetric input, left_basis == right_basis and values are eigenvalues
/// (possibly negative); for general input, values are singular values.
struct SpectrumOrdered {
  Vector values;
  Matrix left_basis;
  Matrix right_basis;
  bool swapped = false;  // set when an n > p input was transposed internally

  Matrix reconstruct() const {
    return left_basis * values.asDiagonal() * right_basis.transpose();
  }
};

/// Eigen-decomposition of a symmetric matrix, eigenvalues descending.
/// Throws NonSymmetricError when the symmetry residual exceeds `sym_tol`.
SpectrumOrdered sorted_eigs(const Matrix& x, double sym_tol = Tolerances::symmetry);

/// Singular value decomposition, singular values descending (all >= 0).
SpectrumOrdered sorted_svd(const Matrix& x);

/// Number of spectrum entries with magnitude above `tol`.
int numeric_rank(const Vector& values, double tol = Tolerances::rank);

int numeric_rank_of(const Matrix& x, double tol = Tolerances::rank);

/// Whether x (weakly) majorizes y: every prefix sum of the descending sort of
/// x dominates that of y; exact majorization additionally requires equal
/// totals. Comparisons carry a slack of `tol`.
bool majorizes(const Vector& x, const Vector& y, bool weak,
               double tol = Tolerances::majorization);

/// Sum of the ell largest singular values.
double top_ell_sum(const Matrix& x, int ell);

/// Length-d(d+1)/2 encoding of a symmetric matrix with off-diagonal entries
/// scaled by sqrt(2), so matrix inner products equal vector dot products.
Vector sym_to_vec(const Matrix& s);
Matrix vec_to_sym(const Vector& v, int dim);

/// Unit vector orthogonal to every row of `rows` (cutoff: singular values
/// below rel_tol times the largest are treated as zero). Returns nullopt when
/// the rows span the full space.
std::optional<Vector> nullspace_unit_vector(const Matrix& rows, int dim,
                                            double rel_tol = 1e-9);

/// Unit-Frobenius-norm symmetric direction orthogonal to every constraint
/// matrix, or nullopt when the constraints span the symmetric space.
std::optional<Matrix> sym_nullspace_direction(const std::vector<Matrix>& constraints,
                                              double rel_tol = 1e-9);

Vector prefix_sums(const Vector& v);
Vector sorted_descending(const Vector& v);

}  // namespace lsopr
