#pragma once

// Dense complex kernels shared by every module. All routines are deterministic
// for a given input and never touch shared state.

#include <complex>

#include <Eigen/Dense>

namespace hilbmod {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace linalg {

/// Relative factor of the shared rank convention: cutoff = scale * dim * kRankEpsilon.
inline constexpr double kRankEpsilon = 1e-12;

/// Singular values in decreasing order. Empty input yields an empty vector.
Eigen::VectorXd singular_values(const CMatrix& m);

/// Largest singular value, 0 for an empty or zero matrix.
double spectral_norm(const CMatrix& m);

/// Shared rank convention: scale * dim * 1e-12.
double auto_cutoff(double scale, Eigen::Index dim);

/// Numerical rank: number of singular values strictly above cutoff.
Eigen::Index rank(const CMatrix& m, double cutoff);

/// Orthonormal basis of the null space (right singular vectors with sigma <= cutoff),
/// phase-normalized column by column.
CMatrix null_basis(const CMatrix& m, double cutoff);

/// Orthonormal basis of the column space (left singular vectors with sigma > cutoff).
CMatrix range_basis(const CMatrix& m, double cutoff);

/// Pseudoinverse by SVD, discarding singular values <= cutoff.
CMatrix pseudo_inverse(const CMatrix& m, double cutoff);

/// Orthonormalizes the columns by Gram-Schmidt with column pivoting: at each step the
/// remaining column of largest residual norm is taken (ties to the lowest index), and the
/// process stops once that norm falls to 1e-12 times the largest input column norm.
CMatrix orthonormalize_columns(const CMatrix& cols);

/// Orthonormal basis of the orthogonal complement of span(basis) in C^dim.
/// `basis` must have orthonormal columns.
CMatrix complement_basis(const CMatrix& basis, Eigen::Index dim);

/// Orthogonal projector basis * basis^H (dim x dim, zero if basis has no columns).
CMatrix projector(const CMatrix& basis, Eigen::Index dim);

/// Rotates each column so its first largest-modulus entry is real and positive.
void normalize_phases(CMatrix& cols);

/// 2-norm condition number; +inf for singular input, 1 for empty.
double condition_number(const CMatrix& m);

}  // namespace linalg
}  // namespace hilbmod
