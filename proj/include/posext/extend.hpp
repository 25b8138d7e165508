#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posext/cones.hpp"
#include "posext/posmap.hpp"

namespace posext {

struct AffineConstraint {
  ComplexMatrix matrix;  // Hermitian F, meaning Re Tr(F X) = target
  double target = 0.0;
};

enum class FeasibleCone { PSD, HalfSpaces };

struct FeasibilityProblem {
  Index ambient_dim = 0;
  std::vector<AffineConstraint> affine;
  FeasibleCone cone = FeasibleCone::PSD;
  std::vector<ComplexMatrix> half_spaces;  // Hermitian G, meaning Re Tr(G X) >= 0
  /// Project onto the shrunk half-spaces Re Tr(G X) >= margin ||G||_2. The
  /// iterates then cross into the original set after finitely many steps.
  double half_space_margin = 0.0;
  int max_iterations = 100000;
  double residual_tolerance = 1e-10;
  std::optional<ComplexMatrix> start;  // zero when absent
};

enum class SolveStatus { Feasible, Infeasible, MaxIterations };
std::string status_name(SolveStatus s);

inline constexpr double kFeasibleGap = 1e-9;
inline constexpr int kStallWindow = 500;
inline constexpr double kStallRelativeChange = 1e-12;

struct DykstraOutcome {
  SolveStatus status = SolveStatus::MaxIterations;
  ComplexMatrix cone_point;    // last iterate of the cone step
  ComplexMatrix affine_point;  // its projection onto the affine set
  double stall_distance = 0.0; // final distance between the two iterates
  std::vector<double> residuals;  // |Re Tr(F_i X) - t_i| then max(0, -Re Tr(G_j X)), at cone_point
  int iterations = 0;
};

/// Dykstra's alternating projections between the affine set and the cone.
/// Throws InconsistentAffine when the constraints have no common solution.
DykstraOutcome dykstra_solve(const FeasibilityProblem& problem, std::uint64_t seed);

struct ProductStateValue {
  double value = 0.0;
  ComplexVector xi;   // unit vector in H
  ComplexVector eta;  // unit vector in K
};

/// Upper bound on min <xi (x) eta, C xi (x) eta> by alternating bottom
/// eigenvector steps from `restarts` random starts (plus one from the
/// bottom eigenvector of C).
ProductStateValue min_product_state_value(const ComplexMatrix& c, Index dim_h, Index dim_k, int restarts,
                                          std::uint64_t seed);

struct Certificate {
  std::string kind;                     // "psd", "product-state", "sampled-margins" or "none"
  std::vector<double> choi_eigenvalues;  // ascending
  double product_value = 0.0;
  ComplexVector xi, eta;
  std::vector<double> margins;  // Re Tr(C x_s) for the sampled constraints
  double min_margin = 0.0;
};

struct ExtensionResult {
  SolveStatus status = SolveStatus::MaxIterations;
  double stall_distance = 0.0;
  std::vector<double> residuals;
  std::optional<LinearMap> extension;
  Certificate certificate;
  double agreement_error = 0.0;
  int iterations = 0;
};

/// max_i ||psi(a_i) - phi(a_i)||_2 over the orthonormal basis of phi's domain.
double agreement_error(const LinearMap& extension, const LinearMap& map);

/// Constraints Re Tr(X (a_i (x) b_j)) = Tr(phi(a_i) b_j^T).
FeasibilityProblem extension_problem(const LinearMap& map);

struct SolverOptions {
  int max_iterations = 100000;
  double residual_tolerance = 1e-10;
  std::uint64_t seed = 0;
};

ExtensionResult extend_cp(const LinearMap& map, const SolverOptions& options = {});

struct PositiveOptions {
  int restarts = 64;
  std::uint64_t seed = 0;
  int max_iterations = 500;   // per restart
  int patience = 50;          // iterations without improvement before giving up a restart
  int certify_restarts = 32;
  int inner_restarts = 2;  // random starts per evaluation of v, besides warm and Schmidt starts
  int inner_steps = 8;     // alternating steps per start
  int pool_size = 512;     // product vectors kept as cuts, shared across restarts
};

/// Subgradient ascent of v(s) = min_product_state_value(X0 + sum s_l N_l)
/// over the fiber of Choi matrices of extensions.
ExtensionResult extend_positive(const LinearMap& map, const PositiveOptions& options = {});

struct ConeOptions {
  int sample_budget = 200;
  std::uint64_t seed = 0;
  int max_iterations = 100000;
  double residual_tolerance = 1e-10;
  int cut_rounds = 20;
  int check_budget = 200;
};

ExtensionResult extend_c_positive(const LinearMap& map, const MappingCone& cone, const ConeOptions& options = {});

enum class CriterionVerdict { NoExtension, ProbablyExists };

struct CriterionOptions {
  int norm_restarts = 16;
  int positivity_budget = 200;
  PositiveOptions positive;
};

struct CriterionResult {
  CriterionVerdict verdict = CriterionVerdict::ProbablyExists;
  std::string reason;  // "norm" or "not positive" for NoExtension
  double norm_lower_bound = 0.0;
  ComplexMatrix witness;  // element of the domain
  bool self_adjoint_only = false;
  std::optional<ExtensionResult> construction;  // ProbablyExists only
  bool constructed() const { return construction && construction->status == SolveStatus::Feasible; }
};

inline constexpr double kNormThreshold = 1.0 + 1e-6;

CriterionResult extension_criterion(const LinearMap& map, std::uint64_t seed, const CriterionOptions& options = {});

}  // namespace posext
