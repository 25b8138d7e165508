#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posext/matrix.hpp"

namespace posext {

enum class Flavor { RealSelfAdjoint, Complex };

/// Gram-Schmidt drop threshold for dependent candidates.
inline constexpr double kDependenceTol = 1e-9;

// An operator system A in B(H), dim H finite. All geometry happens in the
// real space of self-adjoint matrices with inner product Re Tr(x* y); the
// cached basis is an HS-orthonormal basis of the self-adjoint part A_sa and
// always starts with I / sqrt(dim_h). For the Complex flavor, A is the
// complex span of that basis.
class OperatorSystem {
 public:
  static OperatorSystem build(Index dim_h, Flavor flavor, std::vector<ComplexMatrix> generators);
  /// All of B(H).
  static OperatorSystem full(Index dim_h, Flavor flavor = Flavor::Complex);
  /// Self-adjoint part of the unital *-algebra generated by the given
  /// matrices, as a RealSelfAdjoint system.
  static OperatorSystem from_subalgebra_sa(Index dim_h,
                                           const std::vector<ComplexMatrix>& algebra_generators);

  Index dim_h() const { return dim_h_; }
  Flavor flavor() const { return flavor_; }
  const std::vector<ComplexMatrix>& generators() const { return generators_; }
  const std::vector<ComplexMatrix>& basis() const { return basis_; }
  /// Real dimension of A_sa (equal to the complex dimension of A).
  Index dimension() const { return static_cast<Index>(basis_.size()); }
  bool is_full() const { return dimension() == dim_h_ * dim_h_; }

  /// Coordinates Tr(B_k m) over the basis; real for self-adjoint m.
  ComplexVector coordinates(const ComplexMatrix& m) const;
  ComplexMatrix from_coordinates(const ComplexVector& coords) const;
  ComplexMatrix from_coordinates(const RealVector& coords) const;

  /// HS-orthogonal projection onto the (complexified) span of the basis.
  ComplexMatrix project(const ComplexMatrix& m) const;
  /// HS distance from m to A. For the RealSelfAdjoint flavor the
  /// anti-Hermitian part of m counts fully against membership.
  double distance(const ComplexMatrix& m) const;
  bool contains(const ComplexMatrix& m, double tol) const;

  /// HS-orthonormal basis of the orthogonal complement of A_sa in B(H)_sa.
  std::vector<ComplexMatrix> complement_basis() const;

  /// Positive element a - lambda_min(a) I + shift I for self-adjoint a in A.
  ComplexMatrix shifted_psd_element(const ComplexMatrix& a, double shift) const;
  /// Random PSD element: Gaussian coordinates, shift uniform in [0, 0.1].
  ComplexMatrix sample_psd_element(std::uint64_t seed) const;

  /// Same system with the other flavor (the self-adjoint part is shared).
  OperatorSystem with_flavor(Flavor flavor) const;

 private:
  OperatorSystem() = default;

  Index dim_h_ = 0;
  Flavor flavor_ = Flavor::RealSelfAdjoint;
  std::vector<ComplexMatrix> generators_;
  std::vector<ComplexMatrix> basis_;
};

const char* flavor_name(Flavor flavor);
Flavor parse_flavor(const std::string& name);

}  // namespace posext
