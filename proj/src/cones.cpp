#include "posext/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "posext/random.hpp"

namespace posext {

MappingCone parse_cone(const std::string& spec, Index dim) {
  MappingCone cone;
  cone.dim = dim;
  if (spec == "cp") {
    cone.kind = ConeKind::CompletelyPositive;
  } else if (spec == "cocp") {
    cone.kind = ConeKind::CoCompletelyPositive;
  } else if (spec == "dec") {
    cone.kind = ConeKind::Decomposable;
  } else if (spec == "pos") {
    cone.kind = ConeKind::PositiveApprox;
  } else if (spec.rfind("kpos:", 0) == 0) {
    cone.kind = ConeKind::KPositive;
    try {
      cone.k = std::stoi(spec.substr(5));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "bad k in cone '" + spec + "'");
    }
    if (cone.k < 1) throw Error(ErrorKind::InvalidInput, "k must be at least 1");
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown cone '" + spec + "'");
  }
  return cone;
}

std::string cone_label(const MappingCone& cone) {
  switch (cone.kind) {
    case ConeKind::CompletelyPositive: return "cp";
    case ConeKind::CoCompletelyPositive: return "cocp";
    case ConeKind::Decomposable: return "dec";
    case ConeKind::PositiveApprox: return cone.dim == 3 ? "pos (decomposable + Choi map)" : "pos (decomposable)";
    case ConeKind::KPositive: return "kpos:" + std::to_string(cone.k);
  }
  return "?";
}

LinearMap kraus_map(Index dim, const std::vector<ComplexMatrix>& kraus) {
  return LinearMap::from_function(OperatorSystem::full(dim), dim, [&](const ComplexMatrix& x) {
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const ComplexMatrix& v : kraus) out += v.adjoint() * x * v;
    return out;
  });
}

LinearMap cocp_map(Index dim, const std::vector<ComplexMatrix>& kraus) {
  return LinearMap::from_function(OperatorSystem::full(dim), dim, [&](const ComplexMatrix& x) {
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    const ComplexMatrix xt = x.transpose();
    for (const ComplexMatrix& v : kraus) out += v.adjoint() * xt * v;
    return out;
  });
}

LinearMap convex_combination(const LinearMap& a, const LinearMap& b, double weight_a) {
  if (a.dim_k() != b.dim_k() || a.domain().dimension() != b.domain().dimension() ||
      a.dim_h() != b.dim_h())
    throw Error(ErrorKind::DimensionMismatch, "maps have different shapes");
  std::vector<ComplexMatrix> images;
  for (const ComplexMatrix& x : a.domain().basis())
    images.push_back(weight_a * a.apply_projected(x) + (1.0 - weight_a) * b.apply_projected(x));
  return LinearMap(a.domain(), a.dim_k(), std::move(images));
}

LinearMap transpose_map(Index dim) {
  return LinearMap::from_function(OperatorSystem::full(dim), dim,
                                  [](const ComplexMatrix& x) -> ComplexMatrix { return x.transpose(); });
}

LinearMap reduction_map(Index dim) {
  return LinearMap::from_function(OperatorSystem::full(dim), dim, [dim](const ComplexMatrix& x) {
    return ComplexMatrix(x.trace() * identity(dim) - x);
  });
}

LinearMap choi_map_m3() {
  return LinearMap::from_function(OperatorSystem::full(3), 3, [](const ComplexMatrix& x) {
    ComplexMatrix out = -x;
    out(0, 0) += 2.0 * x(0, 0) + x(2, 2);
    out(1, 1) += x(0, 0) + 2.0 * x(1, 1);
    out(2, 2) += x(1, 1) + 2.0 * x(2, 2);
    return out;
  });
}

namespace {

std::vector<ComplexMatrix> random_kraus(Index dim, Rng& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  const int r = count(rng);
  std::vector<ComplexMatrix> kraus;
  for (int i = 0; i < r; ++i) kraus.push_back(random_ginibre(dim, dim, rng) / std::sqrt(double(dim)));
  return kraus;
}

LinearMap conjugated(const LinearMap& inner, const ComplexMatrix& pre, const ComplexMatrix& post) {
  // x -> post* inner(pre* x pre) post
  const Index dim = inner.dim_h();
  return LinearMap::from_function(OperatorSystem::full(dim), inner.dim_k(), [&](const ComplexMatrix& x) {
    return ComplexMatrix(post.adjoint() * inner.apply_projected(pre.adjoint() * x * pre) * post);
  });
}

}  // namespace

LinearMap sample_cone_element(const MappingCone& cone, std::uint64_t seed) {
  const Index n = cone.dim;
  if (n <= 0) throw Error(ErrorKind::DimensionMismatch, "cone dimension must be positive");
  Rng rng(seed);
  switch (cone.kind) {
    case ConeKind::CompletelyPositive:
      return kraus_map(n, random_kraus(n, rng));
    case ConeKind::CoCompletelyPositive:
      return cocp_map(n, random_kraus(n, rng));
    case ConeKind::Decomposable: {
      const LinearMap cp = kraus_map(n, random_kraus(n, rng));
      const LinearMap cocp = cocp_map(n, random_kraus(n, rng));
      return convex_combination(cp, cocp, uniform(rng, 0.0, 1.0));
    }
    case ConeKind::PositiveApprox: {
      if (n == 3 && uniform(rng, 0.0, 1.0) < 1.0 / 3.0) {
        const ComplexMatrix pre = random_unitary(3, rng);
        const ComplexMatrix post = random_unitary(3, rng);
        return conjugated(choi_map_m3(), pre, post);
      }
      const LinearMap cp = kraus_map(n, random_kraus(n, rng));
      const LinearMap cocp = cocp_map(n, random_kraus(n, rng));
      return convex_combination(cp, cocp, uniform(rng, 0.0, 1.0));
    }
    case ConeKind::KPositive: {
      const LinearMap cp = kraus_map(n, random_kraus(n, rng));
      if (cone.k >= n) return cp;
      // cp + s * (transpose o Ad U), shrinking s until the spot check passes.
      const LinearMap twisted = conjugated(transpose_map(n), random_unitary(n, rng), identity(n));
      double s = uniform(rng, 0.0, 1.0) * operator_norm(cp.apply_projected(identity(n)));
      const std::uint64_t check_seed = derive_seed(seed, 0x6B706F73ULL);
      for (int attempt = 0; attempt < 30; ++attempt, s *= 0.5) {
        std::vector<ComplexMatrix> images;
        for (const ComplexMatrix& b : cp.domain().basis())
          images.push_back(cp.apply_projected(b) + s * twisted.apply_projected(b));
        LinearMap candidate(cp.domain(), n, std::move(images));
        if (spot_check_k_positive(candidate, cone.k, 50, check_seed)) return candidate;
      }
      return cp;
    }
  }
  return kraus_map(n, random_kraus(n, rng));
}

ComplexMatrix apply_second_factor(const LinearMap& alpha, Index dim_h, const ComplexMatrix& x) {
  const Index m = alpha.dim_h();
  const Index out_m = alpha.dim_k();
  if (x.rows() != dim_h * m || x.cols() != dim_h * m)
    throw Error(ErrorKind::BadCompositeDimension, "element does not match the tensor shape");
  ComplexMatrix out(dim_h * out_m, dim_h * out_m);
  for (Index i = 0; i < dim_h; ++i)
    for (Index j = 0; j < dim_h; ++j)
      out.block(i * out_m, j * out_m, out_m, out_m) = alpha.apply_projected(x.block(i * m, j * m, m, m));
  return out;
}

bool spot_check_k_positive(const LinearMap& alpha, int k, int trials, std::uint64_t seed) {
  Rng rng(seed);
  const Index dim = alpha.dim_h();
  for (int t = 0; t < trials; ++t) {
    const ComplexVector v = random_unit_vector(k * dim, rng);
    const ComplexMatrix y = apply_second_factor(alpha, k, v * v.adjoint());
    if (min_eigenvalue(y) < -1e-10) return false;
  }
  return true;
}

namespace {

std::vector<LinearMap> cone_pool(const MappingCone& cone, int count, std::uint64_t seed) {
  std::vector<LinearMap> pool;
  for (int b = 0; b < count; ++b)
    pool.push_back(sample_cone_element(cone, derive_seed(seed, static_cast<std::uint64_t>(b))));
  return pool;
}

PacMembership test_against_pool(const ComplexMatrix& x, Index dim_h, const std::vector<LinearMap>& pool) {
  PacMembership out;
  out.min_eigenvalue = min_eigenvalue(x);
  out.checks = 1;
  if (out.min_eigenvalue < -kViolationTol) {
    out.rejected = true;
    return out;
  }
  for (const LinearMap& alpha : pool) {
    const double lam = min_eigenvalue(apply_second_factor(alpha, dim_h, x));
    ++out.checks;
    out.min_eigenvalue = std::min(out.min_eigenvalue, lam);
    if (lam < -kViolationTol) {
      out.rejected = true;
      out.witness = alpha;
      return out;
    }
  }
  return out;
}

ComplexMatrix checked_pac_argument(const ComplexMatrix& x, const OperatorSystem& domain, Index dim_k) {
  const ComplexMatrix h = symmetrized(x);
  const double dist = product_span_distance(domain, dim_k, h);
  if (dist >= kDomainTol * std::max(1.0, h.norm()))
    throw Error(ErrorKind::NotInProductSpan,
                "element is at distance " + std::to_string(dist) + " from A (x) B(K)");
  return h;
}

}  // namespace

PacMembership membership_pac(const ComplexMatrix& x, const OperatorSystem& domain, Index dim_k,
                             const MappingCone& cone, int budget, std::uint64_t seed) {
  const ComplexMatrix h = checked_pac_argument(x, domain, dim_k);
  PacMembership out = test_against_pool(h, domain.dim_h(), cone_pool(cone.on(dim_k), budget, seed));
  if (out.rejected && !out.witness) {
    // rejected by the identity check
    out.witness = LinearMap::from_function(OperatorSystem::full(dim_k), dim_k,
                                           [](const ComplexMatrix& y) { return y; });
  }
  return out;
}

namespace {

std::vector<PacSample> pac_candidates(const OperatorSystem& domain, Index dim_k, const MappingCone& cone,
                                      int budget, std::uint64_t seed,
                                      const ComplexMatrix* choi_hint) {
  const Index n = domain.dim_h();
  const Index nm = n * dim_k;
  const std::vector<LinearMap> pool =
      cone_pool(cone.on(dim_k), cone.sampler.restarts, derive_seed(seed, 0xA1FAULL));
  const std::vector<ComplexMatrix> k_basis = hermitian_basis(dim_k);

  std::vector<PacSample> out;
  auto consider = [&](ComplexMatrix x) {
    const double tr = x.trace().real();
    if (!(tr > 1e-12)) return;
    x /= tr;
    const PacMembership m = test_against_pool(x, n, pool);
    if (!m.rejected) out.push_back({std::move(x), m.checks});
  };

  consider(identity(nm));
  for (int c = 0; c < budget; ++c) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    ComplexMatrix y;
    double lo = 0.0, hi = 0.0;
    if (c % 2 == 0) {
      // generic element of the product span, shifted around the PSD boundary
      y = ComplexMatrix::Zero(nm, nm);
      for (const ComplexMatrix& a : domain.basis())
        for (const ComplexMatrix& b : k_basis) y += standard_normal(rng) * kron(a, b);
      lo = -0.25;
      hi = 0.25;
    } else {
      // compressed pure state: near-extreme, possibly entangled
      const ComplexVector v = random_unit_vector(nm, rng);
      y = project_product_span(domain, dim_k, v * v.adjoint());
      y = hermitian_real_part(y);
      lo = 0.0;
      hi = 0.05;
    }
    const RealVector ev = hermitian_eig(y).eigenvalues;
    const double spread = ev(ev.size() - 1) - ev(0);
    const double shift = -ev(0) + uniform(rng, lo, hi) * spread;
    consider(y + shift * identity(nm));
  }

  if (choi_hint) {
    const HermitianEig eig = hermitian_eig(*choi_hint);
    for (Index k = 0; k < std::min<Index>(3, nm); ++k) {
      if (eig.eigenvalues(k) >= 0) break;
      const ComplexVector v = eig.eigenvectors.col(k);
      ComplexMatrix y = hermitian_real_part(project_product_span(domain, dim_k, v * v.adjoint()));
      const double lam = min_eigenvalue(y);
      if (lam < 0) y -= lam * identity(nm);
      consider(y);
    }
  }
  return out;
}

}  // namespace

std::vector<PacSample> sample_pac(const OperatorSystem& domain, Index dim_k, const MappingCone& cone,
                                  int budget, std::uint64_t seed) {
  return pac_candidates(domain, dim_k, cone, budget, seed, nullptr);
}

CPositivityVerdict check_c_positive(const LinearMap& map, const MappingCone& cone, int budget,
                                    std::uint64_t seed) {
  const ComplexMatrix hint = least_norm_choi(map);
  CPositivityVerdict verdict;
  verdict.value = std::numeric_limits<double>::infinity();
  for (PacSample& s : pac_candidates(map.domain(), map.dim_k(), cone, budget, seed, &hint)) {
    const double value = dual_functional(map, s.element).real();
    ++verdict.samples;
    if (value < verdict.value) {
      verdict.value = value;
      if (value < -kViolationTol) verdict.violation = std::move(s.element);
    }
  }
  return verdict;
}

std::vector<ComplexMatrix> c_positivity_cuts(const LinearMap& map, const MappingCone& cone, int budget,
                                             std::uint64_t seed) {
  const ComplexMatrix hint = least_norm_choi(map);
  std::vector<ComplexMatrix> cuts;
  for (PacSample& s : pac_candidates(map.domain(), map.dim_k(), cone, budget, seed, &hint))
    if (dual_functional(map, s.element).real() < -kViolationTol) cuts.push_back(std::move(s.element));
  return cuts;
}

}  // namespace posext
