#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "posext/error.hpp"

namespace posext {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Entrywise tolerance used for every Hermiticity test.
inline constexpr double kHermitianTol = 1e-10;

struct HermitianEig {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // unitary, columns are eigenvectors
};

ComplexMatrix identity(Index n);
ComplexMatrix matrix_unit(Index n, Index row, Index col);
ComplexMatrix transpose(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

void require_finite(const ComplexMatrix& m);
void require_square(const ComplexMatrix& m);

/// Largest |m - m*| entry.
double hermitian_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

/// (m + m*)/2 after checking the defect against kHermitianTol; throws
/// NonHermitianInput otherwise.
ComplexMatrix symmetrized(const ComplexMatrix& m);

/// Hermitian decomposition m = re_part + i im_part.
ComplexMatrix hermitian_real_part(const ComplexMatrix& m);
ComplexMatrix hermitian_imag_part(const ComplexMatrix& m);

HermitianEig hermitian_eig(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& m);
double max_eigenvalue(const ComplexMatrix& m);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped).
ComplexMatrix psd_project(const ComplexMatrix& m);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);
/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

/// Hilbert-Schmidt real inner product Re Tr(a* b).
double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
/// Tr(a* b), complex.
Complex hs_inner_complex(const ComplexMatrix& a, const ComplexMatrix& b);

// Real coordinates of Hermitian n x n matrices with respect to the
// standard HS-orthonormal basis (diagonal units, then sqrt(2) Re and
// sqrt(2) Im of the strict upper triangle). Inner products are preserved:
// dot(to_real_coords(a), to_real_coords(b)) == hs_inner(a, b).
RealVector to_real_coords(const ComplexMatrix& hermitian);
ComplexMatrix from_real_coords(const RealVector& coords, Index n);

/// The standard HS-orthonormal basis of the self-adjoint n x n matrices,
/// in the same order as `to_real_coords`.
std::vector<ComplexMatrix> hermitian_basis(Index n);

}  // namespace posext
