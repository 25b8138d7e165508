#include "posext/extend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "posext/random.hpp"

namespace posext {

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::MaxIterations: return "max-iterations";
  }
  return "?";
}

namespace {

void require_hermitian_constraint(const ComplexMatrix& m, Index n, const char* what) {
  if (m.rows() != n || m.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has the wrong size");
  require_finite(m);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermitian_defect(m) > kHermitianTol * scale)
    throw Error(ErrorKind::NonHermitianInput, std::string(what) + " is not Hermitian");
}

class AffineProjector {
 public:
  AffineProjector(const std::vector<AffineConstraint>& constraints, Index n) : dim_(n * n) {
    particular_ = RealVector::Zero(dim_);
    if (constraints.empty()) return;
    RealMatrix a(static_cast<Index>(constraints.size()), dim_);
    RealVector t(a.rows());
    for (Index i = 0; i < a.rows(); ++i) {
      const AffineConstraint& c = constraints[static_cast<std::size_t>(i)];
      require_hermitian_constraint(c.matrix, n, "affine constraint");
      a.row(i) = to_real_coords(hermitian_real_part(c.matrix)).transpose();
      t(i) = c.target;
    }
    Eigen::BDCSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    basis_ = svd.matrixV().leftCols(rank);
    const RealVector coeff = svd.matrixU().leftCols(rank).transpose() * t;
    particular_ = basis_ * coeff.cwiseQuotient(sv.head(rank));
    const double residual = (a * particular_ - t).norm();
    if (residual > 1e-8)
      throw Error(ErrorKind::InconsistentAffine,
                  "affine constraints are inconsistent (residual " + std::to_string(residual) + ")");
  }

  RealVector operator()(const RealVector& x) const {
    if (basis_.cols() == 0) return x;
    return x - basis_ * (basis_.transpose() * x) + particular_;
  }

 private:
  Index dim_;
  RealMatrix basis_;
  RealVector particular_;
};

RealVector psd_project_coords(const RealVector& x, Index n) {
  return to_real_coords(psd_project(from_real_coords(x, n)));
}

}  // namespace

DykstraOutcome dykstra_solve(const FeasibilityProblem& problem, std::uint64_t seed) {
  const Index n = problem.ambient_dim;
  if (n <= 0) throw Error(ErrorKind::DimensionMismatch, "ambient dimension must be positive");
  const AffineProjector project_affine(problem.affine, n);
  const Index dim = n * n;
  // |Re Tr(F (X - Y))| <= ||F|| ||X - Y||, so this gap keeps every affine
  // residual at the cone point below kFeasibleGap
  double widest = 1.0;
  for (const AffineConstraint& c : problem.affine) widest = std::max(widest, c.matrix.norm());
  const double gap_tol = kFeasibleGap / widest;

  std::vector<RealVector> g;
  std::vector<double> g_norm2;
  if (problem.cone == FeasibleCone::HalfSpaces) {
    for (const ComplexMatrix& h : problem.half_spaces) {
      require_hermitian_constraint(h, n, "half-space");
      g.push_back(to_real_coords(hermitian_real_part(h)));
      g_norm2.push_back(g.back().squaredNorm());
    }
  }
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  RealVector x = RealVector::Zero(dim);
  if (problem.start) {
    require_hermitian_constraint(*problem.start, n, "start point");
    x = to_real_coords(hermitian_real_part(*problem.start));
  }

  std::vector<RealVector> corrections(problem.cone == FeasibleCone::PSD ? 1 : g.size(),
                                      RealVector::Zero(dim));

  DykstraOutcome out;
  double checkpoint_gap = std::numeric_limits<double>::infinity();
  bool stopped = false;
  bool stalled = false;
  int it = 0;
  for (it = 1; it <= problem.max_iterations; ++it) {
    const RealVector y = project_affine(x);
    if (problem.cone == FeasibleCone::HalfSpaces) {
      double worst = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j)
        if (g_norm2[j] > 0.0) worst = std::max(worst, -g[j].dot(y) / std::sqrt(g_norm2[j]));
      if (worst <= kFeasibleGap) {
        x = y;
        stopped = true;
        break;
      }
    }
    RealVector cur = y;
    if (problem.cone == FeasibleCone::PSD) {
      const RealVector z = cur + corrections[0];
      cur = psd_project_coords(z, n);
      corrections[0] = z - cur;
    } else {
      for (std::size_t j : order) {
        const RealVector z = cur + corrections[j];
        const double v = g[j].dot(z) - problem.half_space_margin * std::sqrt(g_norm2[j]);
        cur = v < 0.0 && g_norm2[j] > 0.0 ? RealVector(z - (v / g_norm2[j]) * g[j]) : z;
        corrections[j] = z - cur;
      }
    }
    const double change = (cur - x).norm();
    const double gap = (y - cur).norm();
    x = cur;
    // a small step alone is not enough: near a feasible point the gap can
    // shrink slower than the iterates move, and an infeasible pair is left
    // to the stall test
    if (change < problem.residual_tolerance && gap < gap_tol) {
      stopped = true;
      break;
    }
    if (it % kStallWindow == 0) {
      if (gap > gap_tol && std::isfinite(checkpoint_gap) &&
          std::abs(gap - checkpoint_gap) <= kStallRelativeChange * checkpoint_gap) {
        stopped = stalled = true;
        break;
      }
      checkpoint_gap = gap;
    }
  }
  out.iterations = std::min(it, problem.max_iterations);

  const RealVector y = project_affine(x);
  out.stall_distance = (y - x).norm();
  if (!stopped) {
    out.status = SolveStatus::MaxIterations;
  } else if (!stalled && out.stall_distance < gap_tol) {
    out.status = SolveStatus::Feasible;
  } else {
    out.status = SolveStatus::Infeasible;
  }
  out.cone_point = from_real_coords(x, n);
  out.affine_point = from_real_coords(y, n);
  for (const AffineConstraint& c : problem.affine)
    out.residuals.push_back(std::abs(hs_inner(c.matrix, out.cone_point) - c.target));
  for (const ComplexMatrix& h : problem.half_spaces)
    out.residuals.push_back(std::max(0.0, -hs_inner(h, out.cone_point)));
  return out;
}

namespace {

double bottom_pair(const ComplexMatrix& m, ComplexVector& vec) {
  const HermitianEig eig = hermitian_eig(m);
  vec = eig.eigenvectors.col(0);
  return eig.eigenvalues(0);
}

// m x m matrix sum_ij conj(xi_i) xi_j c_(ij), c_(ij) the (i, j) block of c.
void contract_first(const ComplexMatrix& c, Index n, Index m, const ComplexVector& xi, ComplexMatrix& out) {
  out.setZero(m, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Complex w = std::conj(xi(i)) * xi(j);
      for (Index l = 0; l < m; ++l)
        for (Index k = l; k < m; ++k) out(k, l) += w * c(i * m + k, j * m + l);
    }
}

// n x n matrix with entries eta* c_(ij) eta.
void contract_second(const ComplexMatrix& c, Index n, Index m, const ComplexVector& eta, ComplexMatrix& out) {
  out.resize(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i) {
      Complex acc = 0.0;
      for (Index k = 0; k < m; ++k) {
        Complex row = 0.0;
        for (Index l = 0; l < m; ++l) row += c(i * m + k, j * m + l) * eta(l);
        acc += std::conj(eta(k)) * row;
      }
      out(i, j) = acc;
    }
}

// Alternating minimization from xi; returns the value and updates xi, eta.
// The eigensolvers read only the lower triangles filled above.
double alternate(const ComplexMatrix& c, Index n, Index m, ComplexVector& xi, ComplexVector& eta,
                 double tol = 1e-12, int max_steps = 500) {
  thread_local Eigen::SelfAdjointEigenSolver<ComplexMatrix> solve_k, solve_h;
  thread_local ComplexMatrix mk, mh;
  double value = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_steps; ++it) {
    contract_first(c, n, m, xi, mk);
    solve_k.compute(mk);
    eta = solve_k.eigenvectors().col(0);
    contract_second(c, n, m, eta, mh);
    solve_h.compute(mh);
    xi = solve_h.eigenvectors().col(0);
    const double next = solve_h.eigenvalues()(0);
    const bool done = std::abs(value - next) < tol;
    value = next;
    if (done) break;
  }
  return value;
}

ComplexVector schmidt_start(const ComplexMatrix& c, Index n, Index m) {
  ComplexVector v;
  bottom_pair(c, v);
  ComplexMatrix shaped(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < m; ++k) shaped(i, k) = v(i * m + k);
  Eigen::JacobiSVD<ComplexMatrix> svd(shaped, Eigen::ComputeThinU);
  return svd.matrixU().col(0);
}

}  // namespace

ProductStateValue min_product_state_value(const ComplexMatrix& c, Index dim_h, Index dim_k, int restarts,
                                          std::uint64_t seed) {
  if (dim_h <= 0 || dim_k <= 0 || c.rows() != dim_h * dim_k || c.cols() != dim_h * dim_k)
    throw Error(ErrorKind::BadCompositeDimension, "matrix is not on C^dim_h (x) C^dim_k");
  require_finite(c);
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  if (hermitian_defect(c) > kHermitianTol * scale)
    throw Error(ErrorKind::NonHermitianInput, "matrix is not Hermitian");
  const ComplexMatrix h = hermitian_real_part(c);

  ProductStateValue best;
  best.value = std::numeric_limits<double>::infinity();
  auto attempt = [&](ComplexVector xi) {
    ComplexVector eta;
    const double v = alternate(h, dim_h, dim_k, xi, eta);
    if (v < best.value) {
      best.value = v;
      best.xi = xi;
      best.eta = eta;
    }
  };
  attempt(schmidt_start(h, dim_h, dim_k));
  Rng rng(seed);
  for (int r = 0; r < restarts; ++r) attempt(random_unit_vector(dim_h, rng));
  return best;
}

double agreement_error(const LinearMap& extension, const LinearMap& map) {
  double worst = 0.0;
  const std::vector<ComplexMatrix>& basis = map.domain().basis();
  for (std::size_t i = 0; i < basis.size(); ++i)
    worst = std::max(worst, (extension.apply_projected(basis[i]) - map.images()[i]).norm());
  return worst;
}

FeasibilityProblem extension_problem(const LinearMap& map) {
  FeasibilityProblem p;
  const Index m = map.dim_k();
  p.ambient_dim = map.dim_h() * m;
  const std::vector<ComplexMatrix> b = hermitian_basis(m);
  const std::vector<ComplexMatrix>& a = map.domain().basis();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (const ComplexMatrix& bj : b)
      p.affine.push_back({kron(a[i], bj), (map.images()[i] * bj.transpose()).trace().real()});
  return p;
}

namespace {

ComplexMatrix trace_matched_identity(const LinearMap& map) {
  const Index n = map.dim_h() * map.dim_k();
  const double tr = map.apply_projected(identity(map.dim_h())).trace().real();
  return (tr / double(n)) * identity(n);
}

void fill_from_outcome(ExtensionResult& r, const DykstraOutcome& o) {
  r.status = o.status;
  r.stall_distance = o.stall_distance;
  r.residuals = o.residuals;
  r.iterations = o.iterations;
}

std::vector<double> ascending(const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

ExtensionResult extend_cp(const LinearMap& map, const SolverOptions& options) {
  FeasibilityProblem p = extension_problem(map);
  p.max_iterations = options.max_iterations;
  p.residual_tolerance = options.residual_tolerance;
  p.start = trace_matched_identity(map);
  const DykstraOutcome o = dykstra_solve(p, options.seed);

  ExtensionResult r;
  fill_from_outcome(r, o);
  r.certificate.kind = "psd";
  r.certificate.choi_eigenvalues = ascending(hermitian_eig(o.cone_point).eigenvalues);
  if (o.status == SolveStatus::Feasible) {
    LinearMap ext = map_from_choi({map.dim_h(), map.dim_k(), o.cone_point});
    r.agreement_error = agreement_error(ext, map);
    if (r.agreement_error >= 1e-8) r.status = SolveStatus::MaxIterations;
    r.extension = std::move(ext);
  }
  return r;
}

ExtensionResult extend_positive(const LinearMap& map, const PositiveOptions& options) {
  const Index n = map.dim_h();
  const Index m = map.dim_k();
  const ComplexMatrix x0 = least_norm_choi(map);
  const std::vector<ComplexMatrix> comp = map.domain().complement_basis();
  const std::vector<ComplexMatrix> kb = hermitian_basis(m);
  std::vector<ComplexMatrix> nulls;
  for (const ComplexMatrix& c : comp)
    for (const ComplexMatrix& b : kb) nulls.push_back(kron(c, b));
  const Index dim = static_cast<Index>(nulls.size());

  auto point = [&](const RealVector& s) {
    ComplexMatrix x = x0;
    for (Index l = 0; l < dim; ++l) x += s(l) * nulls[static_cast<std::size_t>(l)];
    return x;
  };
  auto gradient = [&](const ComplexVector& xi, const ComplexVector& eta) {
    RealVector g(dim);
    Index l = 0;
    for (const ComplexMatrix& c : comp) {
      const double cv = xi.dot(c * xi).real();
      for (const ComplexMatrix& b : kb) g(l++) = cv * eta.dot(b * eta).real();
    }
    return g;
  };

  ExtensionResult r;
  r.certificate.kind = "product-state";
  auto succeed = [&](const ComplexMatrix& x, const ProductStateValue& pv) {
    r.status = SolveStatus::Feasible;
    r.certificate.product_value = pv.value;
    r.certificate.xi = pv.xi;
    r.certificate.eta = pv.eta;
    LinearMap ext = map_from_choi({n, m, x});
    r.agreement_error = agreement_error(ext, map);
    r.extension = std::move(ext);
    r.stall_distance = 0.0;
  };

  const double scale = std::max(1e-12, x0.trace().real() / double(n * m));
  // A positive extension psi has ||psi|| = ||phi(1)||, so ||psi(e_ij)||_2 <= sqrt(m) ||phi(1)||
  // and its Choi matrix lies in the ball ||X||_2 <= n sqrt(m) ||phi(1)||. Since X0 is
  // orthogonal to the null directions this bounds |s|.
  const double radius = double(n) * std::sqrt(double(m)) * operator_norm(map.apply_projected(identity(n)));
  const double s_radius = std::sqrt(std::max(0.0, radius * radius - x0.squaredNorm()));
  // Every product vector w seen so far gives the affine upper bound
  // v(s) <= <w, X0 w> + grad_w . s; pooling them keeps the ascent from
  // returning to directions the inner minimization happens to miss.
  struct Cut {
    double offset;
    RealVector slope;
    ComplexVector xi, eta;
  };
  std::vector<Cut> pool;
  std::size_t pool_next = 0;
  auto remember = [&](const ComplexVector& xi, const ComplexVector& eta) {
    const ComplexVector w = kron(xi, eta);
    Cut c{w.dot(x0 * w).real(), gradient(xi, eta), xi, eta};
    if (static_cast<int>(pool.size()) < options.pool_size) {
      pool.push_back(std::move(c));
    } else if (options.pool_size > 0) {
      pool[pool_next] = std::move(c);
      pool_next = (pool_next + 1) % pool.size();
    }
  };

  double overall_best = -std::numeric_limits<double>::infinity();
  ProductStateValue overall_pv;
  const int restarts = std::max(1, options.restarts);
  for (int restart = 0; restart < restarts; ++restart) {
    const std::uint64_t rseed = derive_seed(options.seed, static_cast<std::uint64_t>(restart));
    Rng rng(rseed);
    RealVector s = RealVector::Zero(dim);
    if (restart > 0 && dim > 0) {
      s = random_real_vector(dim, rng);
      s *= uniform(rng, 0.0, 1.0) * s_radius / std::max(1e-300, s.norm());
    }
    ComplexVector xi = random_unit_vector(n, rng);
    double best = -std::numeric_limits<double>::infinity();
    double level_gap = 0.1 * scale;
    int stale = 0;
    for (int it = 0; it < options.max_iterations; ++it) {
      ++r.iterations;
      const ComplexMatrix x = point(s);

      double v_pool = std::numeric_limits<double>::infinity();
      std::optional<Cut> lowest;
      {
        const Cut* arg = nullptr;
        for (const Cut& c : pool) {
          const double val = c.offset + c.slope.dot(s);
          if (val < v_pool) {
            v_pool = val;
            arg = &c;
          }
        }
        if (arg) lowest = *arg;
      }
      // alternating minimization has non-global fixed points: take the best of
      // a warm start, the Schmidt start, the lowest pooled vector and random starts
      ComplexVector eta;
      const double inner_tol = 1e-10 * scale;
      double v = alternate(x, n, m, xi, eta, inner_tol, options.inner_steps);
      std::vector<ComplexVector> starts{schmidt_start(x, n, m)};
      if (lowest) starts.push_back(lowest->xi);
      for (int k = 0; k < options.inner_restarts; ++k) starts.push_back(random_unit_vector(n, rng));
      for (ComplexVector& xi2 : starts) {
        ComplexVector eta2;
        const double v2 = alternate(x, n, m, xi2, eta2, inner_tol, options.inner_steps);
        if (v2 < v) {
          v = v2;
          xi = xi2;
          eta = eta2;
        }
      }
      remember(xi, eta);
      RealVector g;
      if (lowest && v_pool < v) {
        v = v_pool;
        g = lowest->slope;
      } else {
        g = gradient(xi, eta);
      }

      if (v >= -kViolationTol) {
        const ProductStateValue pv = min_product_state_value(
            x, n, m, options.certify_restarts, derive_seed(rseed, static_cast<std::uint64_t>(it) + 1));
        if (pv.value >= -kViolationTol) {
          succeed(x, pv);
          return r;
        }
        remember(pv.xi, pv.eta);
        v = pv.value;
        g = gradient(pv.xi, pv.eta);
      }
      if (v > overall_best) {
        overall_best = v;
        overall_pv = {v, xi, eta};
      }
      if (v > best + 1e-5 * scale) {
        best = v;
        stale = 0;
      } else if (++stale % 10 == 0) {
        level_gap *= 0.5;
      }
      if (stale > options.patience || dim == 0) break;
      const double g2 = g.squaredNorm();
      if (g2 < 1e-300) break;
      const double target = std::max(best, v) + level_gap;
      s += ((target - v) / g2) * g;
      if (s.norm() > s_radius) s *= s_radius / s.norm();
    }
  }
  r.status = SolveStatus::Infeasible;
  r.stall_distance = std::max(0.0, -overall_best);
  r.certificate.product_value = overall_pv.value;
  r.certificate.xi = overall_pv.xi;
  r.certificate.eta = overall_pv.eta;
  return r;
}

ExtensionResult extend_c_positive(const LinearMap& map, const MappingCone& cone, const ConeOptions& options) {
  const Index n = map.dim_h();
  const Index m = map.dim_k();
  FeasibilityProblem p = extension_problem(map);
  p.cone = FeasibleCone::HalfSpaces;
  p.max_iterations = options.max_iterations;
  p.residual_tolerance = options.residual_tolerance;
  p.start = trace_matched_identity(map);
  if (options.sample_budget > 0) {
    for (PacSample& s : sample_pac(OperatorSystem::full(n), m, cone.on(n), options.sample_budget, options.seed))
      p.half_spaces.push_back(std::move(s.element));
  }

  ExtensionResult r;
  r.certificate.kind = "sampled-margins";
  const int rounds = options.sample_budget > 0 ? std::max(1, options.cut_rounds) : 1;
  const double scale = p.start->trace().real() / double(n * m);
  for (int round = 0; round < rounds; ++round) {
    const std::uint64_t solve_seed = derive_seed(options.seed, 0xD1 + static_cast<std::uint64_t>(round));
    p.half_space_margin = 1e-7 * scale;
    DykstraOutcome o = dykstra_solve(p, solve_seed);
    if (o.status != SolveStatus::Feasible) {
      p.half_space_margin = 0.0;
      o = dykstra_solve(p, solve_seed);
    }
    fill_from_outcome(r, o);
    if (o.status != SolveStatus::Feasible) {
      r.extension.reset();
      return r;
    }
    LinearMap ext = map_from_choi({n, m, o.affine_point});
    r.agreement_error = agreement_error(ext, map);
    r.certificate.margins.clear();
    for (const ComplexMatrix& h : p.half_spaces) r.certificate.margins.push_back(hs_inner(h, o.affine_point));
    r.certificate.min_margin =
        r.certificate.margins.empty() ? 0.0 : *std::min_element(r.certificate.margins.begin(), r.certificate.margins.end());
    r.extension = std::move(ext);

    std::vector<ComplexMatrix> cuts;
    if (options.sample_budget > 0)
      cuts = c_positivity_cuts(*r.extension, cone, options.check_budget,
                               derive_seed(options.seed, 0xC0 + static_cast<std::uint64_t>(round)));
    if (cuts.empty()) {
      const bool ok = r.certificate.min_margin >= -kViolationTol && r.agreement_error < 1e-8;
      r.status = ok ? SolveStatus::Feasible : SolveStatus::MaxIterations;
      return r;
    }
    for (ComplexMatrix& c : cuts) p.half_spaces.push_back(std::move(c));
  }
  r.status = SolveStatus::MaxIterations;
  return r;
}

CriterionResult extension_criterion(const LinearMap& map, std::uint64_t seed, const CriterionOptions& options) {
  CriterionResult out;
  out.self_adjoint_only = map.domain().flavor() == Flavor::RealSelfAdjoint;
  if (options.positivity_budget > 0) {
    const PositivityVerdict pv = check_positive(map, options.positivity_budget, derive_seed(seed, 1), 8);
    if (pv.violated()) {
      out.verdict = CriterionVerdict::NoExtension;
      out.reason = "not positive";
      out.witness = *pv.witness;
      return out;
    }
  }
  const Unitalized u = unitalize(map);
  const NormEstimate ne = restricted_norm(u.map, options.norm_restarts, derive_seed(seed, 2));
  out.norm_lower_bound = ne.lower_bound;
  out.witness = ne.witness;
  if (ne.lower_bound > kNormThreshold) {
    out.verdict = CriterionVerdict::NoExtension;
    out.reason = "norm";
    return out;
  }
  out.verdict = CriterionVerdict::ProbablyExists;
  PositiveOptions po = options.positive;
  po.seed = derive_seed(seed, 3);
  ExtensionResult ext = extend_positive(u.map, po);
  if (ext.extension) {
    ext.extension = transport_extension(*ext.extension, u.record);
    ext.agreement_error = agreement_error(*ext.extension, map);
  }
  out.construction = std::move(ext);
  return out;
}

}  // namespace posext
