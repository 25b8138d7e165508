#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "posext/matrix.hpp"
#include "posext/opsys.hpp"

namespace posext {

/// Membership tolerance for map arguments.
inline constexpr double kDomainTol = 1e-8;
/// Eigenvalues of phi(1) at or below this are treated as rank deficiency.
inline constexpr double kRangeCutoff = 1e-9;
/// A positivity violation must be more negative than this.
inline constexpr double kViolationTol = 1e-8;

// Linear map phi: A -> B(K), stored as the images of A's orthonormal
// self-adjoint basis. Images are Hermitian, so phi is Hermitian-preserving
// and its complex-linear extension is determined by them.
class LinearMap {
 public:
  LinearMap(OperatorSystem domain, Index dim_k, std::vector<ComplexMatrix> images);

  /// Tabulates f on the domain basis.
  static LinearMap from_function(OperatorSystem domain, Index dim_k,
                                 const std::function<ComplexMatrix(const ComplexMatrix&)>& f);

  const OperatorSystem& domain() const { return domain_; }
  Index dim_h() const { return domain_.dim_h(); }
  Index dim_k() const { return dim_k_; }
  const std::vector<ComplexMatrix>& images() const { return images_; }

  /// phi(a); throws NotInDomain unless a lies in A within kDomainTol.
  ComplexMatrix apply(const ComplexMatrix& a) const;
  /// phi(P_A a): no membership check, complex-linear.
  ComplexMatrix apply_projected(const ComplexMatrix& a) const;
  ComplexMatrix apply_coordinates(const ComplexVector& coords) const;

  /// Restriction to a subsystem of the domain.
  LinearMap restrict_to(const OperatorSystem& subsystem) const;

 private:
  OperatorSystem domain_;
  Index dim_k_;
  std::vector<ComplexMatrix> images_;
};

// Element of B(H) (x) B(K) representing a full-domain map through
// Tr(C (a (x) b)) = Tr(phi(a) b^T), i.e. C = sum_ij e_ij (x) phi(e_ji)^T.
struct ChoiMatrix {
  Index dim_h = 0;
  Index dim_k = 0;
  ComplexMatrix matrix;
};

ChoiMatrix choi_matrix(const LinearMap& map);
LinearMap map_from_choi(const ChoiMatrix& choi, Flavor flavor = Flavor::Complex);

/// Choi matrix of phi composed with the HS projection onto its domain; the
/// least-norm element of the affine set of Choi matrices of extensions.
ComplexMatrix least_norm_choi(const LinearMap& map);

/// phi~(x) for x in span{a_i (x) e_kl}; throws NotInProductSpan otherwise.
Complex dual_functional(const LinearMap& map, const ComplexMatrix& x);
/// HS distance of x to the product span A (x) B(K).
double product_span_distance(const OperatorSystem& domain, Index dim_k, const ComplexMatrix& x);
ComplexMatrix project_product_span(const OperatorSystem& domain, Index dim_k, const ComplexMatrix& x);

// Data needed to move extensions between phi and its unitalization
// phi' = S V* phi(.) V S, where the columns of V span the range of phi(1)
// and S = (V* phi(1) V)^{-1/2}. When phi(1) is invertible V = I.
struct UnitalizationRecord {
  ComplexMatrix range_projection;  // p = V V*, dim_k x dim_k
  ComplexMatrix scaling;           // phi(1)^{-1/2} on the range, zero off it
  ComplexMatrix range_basis;       // V, dim_k x compressed_dim
  ComplexMatrix compressed_scaling;  // S, compressed_dim x compressed_dim
  Index compressed_dim = 0;
};

struct Unitalized {
  LinearMap map;
  UnitalizationRecord record;
};

Unitalized unitalize(const LinearMap& map);
/// Given an extension of the unitalized map, the corresponding extension of
/// the original map (psi = V S^{-1} psi'(.) S^{-1} V*).
LinearMap transport_extension(const LinearMap& unital_extension, const UnitalizationRecord& record);

struct PositivityVerdict {
  std::optional<ComplexMatrix> witness;  // PSD element of A, operator norm 1
  double min_eigenvalue = 0.0;           // lambda_min(phi(witness)) or best found
  int samples_used = 0;
  bool violated() const { return witness.has_value(); }
};

/// Semi-decision of positivity on A: random PSD samples followed by local
/// refinement of lambda_min(phi(a)) / ||a|| over the boundary of A+.
PositivityVerdict check_positive(const LinearMap& map, int budget, std::uint64_t seed,
                                 int restarts = 64);

struct NormEstimate {
  double lower_bound = 0.0;
  ComplexMatrix witness;  // ||phi(witness)|| / ||witness|| == lower_bound
  bool self_adjoint_only = false;
};

/// Multistart search for sup ||phi(a)|| / ||a|| over A (the complex span
/// for Complex systems, A_sa for RealSelfAdjoint ones).
NormEstimate restricted_norm(const LinearMap& map, int restarts, std::uint64_t seed);

/// max |Tr(C (e_ij (x) e_kl)) - Tr(phi(e_ij) e_kl^T)| over matrix units.
double duality_residual(const LinearMap& full_map, const ChoiMatrix& choi);

}  // namespace posext
