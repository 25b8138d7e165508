#include "posext/opsys.hpp"

#include <cmath>
#include <string>

#include "posext/random.hpp"

namespace posext {
namespace {

// Modified Gram-Schmidt with one reorthogonalization pass. Candidates whose
// residual norm falls below kDependenceTol are dropped.
template <typename Vec>
bool orthonormalize_into(std::vector<Vec>& basis, Vec v) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& q : basis) v -= q.dot(v) * q;
  const double norm = v.norm();
  if (norm < kDependenceTol) return false;
  basis.push_back(v / norm);
  return true;
}

ComplexVector vectorize(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Index n) {
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

double residual_norm(const std::vector<ComplexVector>& basis, ComplexVector v) {
  for (int pass = 0; pass < 2; ++pass)
    for (const ComplexVector& q : basis) v -= q.dot(v) * q;
  return v.norm();
}

void check_generators(Index dim_h, const std::vector<ComplexMatrix>& generators) {
  if (dim_h <= 0) throw Error(ErrorKind::DimensionMismatch, "dim_h must be positive");
  for (const ComplexMatrix& g : generators) {
    if (g.rows() != dim_h || g.cols() != dim_h)
      throw Error(ErrorKind::DimensionMismatch,
                  "generator is " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()) +
                      ", expected " + std::to_string(dim_h) + "x" + std::to_string(dim_h));
    require_finite(g);
  }
}

}  // namespace

OperatorSystem OperatorSystem::build(Index dim_h, Flavor flavor,
                                     std::vector<ComplexMatrix> generators) {
  check_generators(dim_h, generators);

  std::vector<ComplexMatrix> candidates;
  if (flavor == Flavor::RealSelfAdjoint) {
    for (const ComplexMatrix& g : generators) {
      const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
      if (hermitian_defect(g) > kHermitianTol * scale)
        throw Error(ErrorKind::NonHermitianGenerator, "generator is not self-adjoint");
      candidates.push_back(hermitian_real_part(g));
    }
  } else {
    std::vector<ComplexVector> span;
    for (const ComplexMatrix& g : generators) orthonormalize_into(span, vectorize(g));
    if (residual_norm(span, vectorize(identity(dim_h))) >= kHermitianTol)
      throw Error(ErrorKind::IdentityNotInSpan, "identity is not in the span of the generators");
    for (const ComplexMatrix& g : generators) {
      const double scale = std::max(1.0, g.norm());
      if (residual_norm(span, vectorize(g.adjoint())) > kHermitianTol * scale)
        throw Error(ErrorKind::NotSelfAdjointClosed, "span is not closed under adjoint");
      candidates.push_back(hermitian_real_part(g));
      candidates.push_back(hermitian_imag_part(g));
    }
  }

  std::vector<RealVector> probe;
  for (const ComplexMatrix& c : candidates) orthonormalize_into(probe, to_real_coords(c));
  RealVector id = to_real_coords(identity(dim_h));
  for (int pass = 0; pass < 2; ++pass)
    for (const RealVector& q : probe) id -= q.dot(id) * q;
  if (id.norm() >= kHermitianTol)
    throw Error(ErrorKind::IdentityNotInSpan,
                "distance of I to the span is " + std::to_string(id.norm()));

  // Rebuild with I first so basis()[0] == I / sqrt(dim_h).
  std::vector<RealVector> ortho;
  orthonormalize_into(ortho, to_real_coords(identity(dim_h)));
  for (const ComplexMatrix& c : candidates) orthonormalize_into(ortho, to_real_coords(c));

  OperatorSystem sys;
  sys.dim_h_ = dim_h;
  sys.flavor_ = flavor;
  sys.generators_ = std::move(generators);
  for (const RealVector& q : ortho) sys.basis_.push_back(from_real_coords(q, dim_h));
  return sys;
}

OperatorSystem OperatorSystem::full(Index dim_h, Flavor flavor) {
  return build(dim_h, flavor, hermitian_basis(dim_h));
}

OperatorSystem OperatorSystem::from_subalgebra_sa(
    Index dim_h, const std::vector<ComplexMatrix>& algebra_generators) {
  check_generators(dim_h, algebra_generators);
  std::vector<ComplexVector> span;
  orthonormalize_into(span, vectorize(identity(dim_h)));
  for (const ComplexMatrix& g : algebra_generators) {
    orthonormalize_into(span, vectorize(g));
    orthonormalize_into(span, vectorize(g.adjoint()));
  }

  const Index cap = dim_h * dim_h * dim_h * dim_h;
  bool grew = true;
  Index iterations = 0;
  while (grew) {
    if (++iterations > cap)
      throw Error(ErrorKind::ClosureNotReached, "span did not stabilize");
    grew = false;
    const std::size_t current = span.size();
    for (std::size_t i = 0; i < current; ++i)
      for (std::size_t j = 0; j < current; ++j) {
        const ComplexMatrix prod = unvectorize(span[i], dim_h) * unvectorize(span[j], dim_h);
        grew |= orthonormalize_into(span, vectorize(prod));
        grew |= orthonormalize_into(span, vectorize(ComplexMatrix(prod.adjoint())));
      }
  }

  std::vector<ComplexMatrix> hermitian_parts;
  for (const ComplexVector& v : span) {
    const ComplexMatrix m = unvectorize(v, dim_h);
    hermitian_parts.push_back(hermitian_real_part(m));
    hermitian_parts.push_back(hermitian_imag_part(m));
  }
  return build(dim_h, Flavor::RealSelfAdjoint, std::move(hermitian_parts));
}

ComplexVector OperatorSystem::coordinates(const ComplexMatrix& m) const {
  if (m.rows() != dim_h_ || m.cols() != dim_h_)
    throw Error(ErrorKind::DimensionMismatch, "matrix does not act on H");
  ComplexVector c(dimension());
  // B_k is Hermitian, so Tr(B_k m) = Tr(B_k* m).
  for (Index k = 0; k < dimension(); ++k) c(k) = hs_inner_complex(basis_[k], m);
  return c;
}

ComplexMatrix OperatorSystem::from_coordinates(const ComplexVector& coords) const {
  if (coords.size() != dimension())
    throw Error(ErrorKind::DimensionMismatch, "coordinate vector has wrong length");
  ComplexMatrix out = ComplexMatrix::Zero(dim_h_, dim_h_);
  for (Index k = 0; k < dimension(); ++k) out += coords(k) * basis_[k];
  return out;
}

ComplexMatrix OperatorSystem::from_coordinates(const RealVector& coords) const {
  return from_coordinates(ComplexVector(coords.cast<Complex>()));
}

ComplexMatrix OperatorSystem::project(const ComplexMatrix& m) const {
  return from_coordinates(coordinates(m));
}

double OperatorSystem::distance(const ComplexMatrix& m) const {
  if (m.rows() != dim_h_ || m.cols() != dim_h_)
    throw Error(ErrorKind::DimensionMismatch, "matrix does not act on H");
  const ComplexMatrix re = hermitian_real_part(m);
  const ComplexMatrix im = hermitian_imag_part(m);
  const double d_re = (re - project(re)).norm();
  const double d_im = flavor_ == Flavor::Complex ? (im - project(im)).norm() : im.norm();
  return std::hypot(d_re, d_im);
}

bool OperatorSystem::contains(const ComplexMatrix& m, double tol) const {
  if (m.rows() != dim_h_ || m.cols() != dim_h_) return false;
  return distance(m) < tol;
}

std::vector<ComplexMatrix> OperatorSystem::complement_basis() const {
  std::vector<RealVector> ortho;
  for (const ComplexMatrix& b : basis_) ortho.push_back(to_real_coords(b));
  const std::size_t own = ortho.size();
  for (Index k = 0; k < dim_h_ * dim_h_; ++k)
    orthonormalize_into(ortho, RealVector(RealVector::Unit(dim_h_ * dim_h_, k)));
  std::vector<ComplexMatrix> out;
  for (std::size_t k = own; k < ortho.size(); ++k) out.push_back(from_real_coords(ortho[k], dim_h_));
  return out;
}

ComplexMatrix OperatorSystem::shifted_psd_element(const ComplexMatrix& a, double shift) const {
  const ComplexMatrix h = symmetrized(a);
  return h + (shift - min_eigenvalue(h)) * identity(dim_h_);
}

ComplexMatrix OperatorSystem::sample_psd_element(std::uint64_t seed) const {
  Rng rng(seed);
  const RealVector coords = random_real_vector(dimension(), rng);
  const double shift = uniform(rng, 0.0, 0.1);
  return shifted_psd_element(from_coordinates(coords), shift);
}

OperatorSystem OperatorSystem::with_flavor(Flavor flavor) const {
  OperatorSystem copy = *this;
  copy.flavor_ = flavor;
  return copy;
}

const char* flavor_name(Flavor flavor) {
  return flavor == Flavor::Complex ? "complex" : "real-sa";
}

Flavor parse_flavor(const std::string& name) {
  if (name == "complex") return Flavor::Complex;
  if (name == "real-sa") return Flavor::RealSelfAdjoint;
  throw Error(ErrorKind::InvalidInput, "unknown flavor '" + name + "'");
}

}  // namespace posext
