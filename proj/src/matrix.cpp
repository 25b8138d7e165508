#include "posext/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace posext {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::IdentityNotInSpan: return "IdentityNotInSpan";
    case ErrorKind::NotSelfAdjointClosed: return "NotSelfAdjointClosed";
    case ErrorKind::NonHermitianGenerator: return "NonHermitianGenerator";
    case ErrorKind::ClosureNotReached: return "ClosureNotReached";
    case ErrorKind::NotInDomain: return "NotInDomain";
    case ErrorKind::DomainNotFull: return "DomainNotFull";
    case ErrorKind::NotInProductSpan: return "NotInProductSpan";
    case ErrorKind::NotPositiveAtIdentity: return "NotPositiveAtIdentity";
    case ErrorKind::ZeroMap: return "ZeroMap";
    case ErrorKind::InconsistentAffine: return "InconsistentAffine";
    case ErrorKind::BadCompositeDimension: return "BadCompositeDimension";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix matrix_unit(Index n, Index row, Index col) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(row, col) = 1.0;
  return e;
}

ComplexMatrix transpose(const ComplexMatrix& m) { return m.transpose(); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

void require_finite(const ComplexMatrix& m) {
  if (!m.allFinite()) throw Error(ErrorKind::NonFiniteEntry, "matrix has NaN or Inf entries");
}

void require_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch,
                "expected a nonempty square matrix, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
}

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return hermitian_defect(m) <= tol; }

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  require_square(m);
  // Scale-aware: Kronecker chains of O(1) entries accumulate absolute round-off.
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double defect = hermitian_defect(m);
  if (defect > kHermitianTol * scale)
    throw Error(ErrorKind::NonHermitianInput, "asymmetry " + std::to_string(defect));
  return 0.5 * (m + m.adjoint());
}

ComplexMatrix hermitian_real_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix hermitian_imag_part(const ComplexMatrix& m) {
  return Complex(0.0, -0.5) * (m - m.adjoint());
}

HermitianEig hermitian_eig(const ComplexMatrix& m) {
  const ComplexMatrix h = symmetrized(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrized(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double max_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrized(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

ComplexMatrix psd_project(const ComplexMatrix& m) {
  const HermitianEig eig = hermitian_eig(m);
  const RealVector clamped = eig.eigenvalues.cwiseMax(0.0);
  ComplexMatrix out = eig.eigenvectors * clamped.cast<Complex>().asDiagonal() *
                      eig.eigenvectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

namespace {

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  if (m.rows() == m.cols() && is_hermitian(m, 0.0)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

}  // namespace

double operator_norm(const ComplexMatrix& m) {
  const RealVector s = singular_values(m);
  return s.size() == 0 ? 0.0 : s.maxCoeff();
}

double trace_norm(const ComplexMatrix& m) { return singular_values(m).sum(); }

double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return hs_inner_complex(a, b).real();
}

Complex hs_inner_complex(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "hs_inner operands differ in shape");
  // Tr(a* b) = sum conj(a_ij) b_ij
  return a.conjugate().cwiseProduct(b).sum();
}

RealVector to_real_coords(const ComplexMatrix& hermitian) {
  const Index n = hermitian.rows();
  RealVector out(n * n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) out(k++) = hermitian(i, i).real();
  const double r2 = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      out(k++) = r2 * hermitian(i, j).real();
      out(k++) = r2 * hermitian(i, j).imag();
    }
  return out;
}

ComplexMatrix from_real_coords(const RealVector& coords, Index n) {
  if (coords.size() != n * n)
    throw Error(ErrorKind::DimensionMismatch, "coordinate vector has wrong length");
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) out(i, i) = coords(k++);
  const double inv_r2 = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const Complex z(coords(k) * inv_r2, coords(k + 1) * inv_r2);
      k += 2;
      out(i, j) = z;
      out(j, i) = std::conj(z);
    }
  return out;
}

std::vector<ComplexMatrix> hermitian_basis(Index n) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  for (Index k = 0; k < n * n; ++k) basis.push_back(from_real_coords(RealVector::Unit(n * n, k), n));
  return basis;
}

}  // namespace posext
