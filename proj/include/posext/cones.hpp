#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posext/posmap.hpp"

namespace posext {

enum class ConeKind { CompletelyPositive, CoCompletelyPositive, Decomposable, PositiveApprox, KPositive };

struct SamplerConfig {
  int restarts = 16;  // cone elements drawn per membership test inside sample_pac
};

// A mapping cone on B(dim) described by its kind. Elements are produced by
// a sampler; the positive-maps cone itself is only approximated
// (PositiveApprox = decomposable maps plus, for dim 3, conjugates of the
// Choi map), and reports should say which cone was actually sampled.
struct MappingCone {
  Index dim = 0;
  ConeKind kind = ConeKind::CompletelyPositive;
  int k = 1;  // KPositive only
  SamplerConfig sampler;

  MappingCone on(Index other_dim) const {
    MappingCone c = *this;
    c.dim = other_dim;
    return c;
  }
};

/// "cp" | "cocp" | "dec" | "pos" | "kpos:k"
MappingCone parse_cone(const std::string& spec, Index dim);
std::string cone_label(const MappingCone& cone);

// Building blocks, exposed for tests and instance generation.
LinearMap kraus_map(Index dim, const std::vector<ComplexMatrix>& kraus);   // sum V* x V
LinearMap cocp_map(Index dim, const std::vector<ComplexMatrix>& kraus);    // sum V* x^T V
LinearMap convex_combination(const LinearMap& a, const LinearMap& b, double weight_a);
LinearMap transpose_map(Index dim);
/// x -> Tr(x) 1 - x.
LinearMap reduction_map(Index dim);
/// The (2, 0, 1) Choi map on M_3.
LinearMap choi_map_m3();

LinearMap sample_cone_element(const MappingCone& cone, std::uint64_t seed);

/// (iota (x) alpha)(x) for x in B(H) (x) B(K) and alpha acting on B(K).
ComplexMatrix apply_second_factor(const LinearMap& alpha, Index dim_h, const ComplexMatrix& x);

/// Spot check that iota_k (x) alpha sends `trials` random rank-one PSD
/// matrices on C^k (x) C^dim to PSD matrices.
bool spot_check_k_positive(const LinearMap& alpha, int k, int trials, std::uint64_t seed);

struct PacMembership {
  bool rejected = false;
  int checks = 0;
  std::optional<LinearMap> witness;  // the rejecting alpha
  double min_eigenvalue = 0.0;       // lowest lambda_min over the checks
};

/// Semi-decision of x in P(A, C). The identity is always checked first;
/// then `budget` sampled cone elements acting on the B(K) factor.
PacMembership membership_pac(const ComplexMatrix& x, const OperatorSystem& domain, Index dim_k,
                             const MappingCone& cone, int budget, std::uint64_t seed);

struct PacSample {
  ComplexMatrix element;  // trace one
  int checks_passed = 0;
};

/// Random trace-one elements of (A (x) B(K))_sa that survive membership_pac,
/// starting with 1 (x) 1 / (dim_h dim_k).
std::vector<PacSample> sample_pac(const OperatorSystem& domain, Index dim_k, const MappingCone& cone,
                                  int budget, std::uint64_t seed);

struct CPositivityVerdict {
  std::optional<ComplexMatrix> violation;  // x in the sampled P(A, C)
  double value = 0.0;                      // lowest Re phi~(x) seen
  int samples = 0;
  bool violated() const { return violation.has_value(); }
};

/// Evaluates phi~ on sample_pac output plus candidates built from the
/// bottom eigenvectors of the least-norm Choi matrix of phi.
CPositivityVerdict check_c_positive(const LinearMap& map, const MappingCone& cone, int budget,
                                    std::uint64_t seed);

/// All candidates of check_c_positive with Re phi~(x) < -kViolationTol.
std::vector<ComplexMatrix> c_positivity_cuts(const LinearMap& map, const MappingCone& cone,
                                             int budget, std::uint64_t seed);

}  // namespace posext
