#include "posext/posmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "posext/random.hpp"
#include "search.hpp"

namespace posext {

LinearMap::LinearMap(OperatorSystem domain, Index dim_k, std::vector<ComplexMatrix> images)
    : domain_(std::move(domain)), dim_k_(dim_k), images_(std::move(images)) {
  if (dim_k_ <= 0) throw Error(ErrorKind::DimensionMismatch, "dim_k must be positive");
  if (static_cast<Index>(images_.size()) != domain_.dimension())
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(domain_.dimension()) + " images, got " +
                    std::to_string(images_.size()));
  for (ComplexMatrix& img : images_) {
    if (img.rows() != dim_k_ || img.cols() != dim_k_)
      throw Error(ErrorKind::DimensionMismatch, "image does not act on K");
    require_finite(img);
    img = symmetrized(img);
  }
}

LinearMap LinearMap::from_function(OperatorSystem domain, Index dim_k,
                                   const std::function<ComplexMatrix(const ComplexMatrix&)>& f) {
  std::vector<ComplexMatrix> images;
  for (const ComplexMatrix& b : domain.basis()) images.push_back(f(b));
  return LinearMap(std::move(domain), dim_k, std::move(images));
}

ComplexMatrix LinearMap::apply_coordinates(const ComplexVector& coords) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_k_, dim_k_);
  for (std::size_t k = 0; k < images_.size(); ++k) out += coords(static_cast<Index>(k)) * images_[k];
  return out;
}

ComplexMatrix LinearMap::apply_projected(const ComplexMatrix& a) const {
  return apply_coordinates(domain_.coordinates(a));
}

ComplexMatrix LinearMap::apply(const ComplexMatrix& a) const {
  if (a.rows() != dim_h() || a.cols() != dim_h())
    throw Error(ErrorKind::DimensionMismatch, "argument does not act on H");
  const double dist = domain_.distance(a);
  if (dist >= kDomainTol * std::max(1.0, a.norm()))
    throw Error(ErrorKind::NotInDomain, "argument is at distance " + std::to_string(dist) +
                                            " from the domain");
  return apply_projected(a);
}

LinearMap LinearMap::restrict_to(const OperatorSystem& subsystem) const {
  if (subsystem.dim_h() != dim_h())
    throw Error(ErrorKind::DimensionMismatch, "subsystem acts on a different H");
  std::vector<ComplexMatrix> images;
  for (const ComplexMatrix& b : subsystem.basis()) images.push_back(apply(b));
  return LinearMap(subsystem, dim_k_, std::move(images));
}

ChoiMatrix choi_matrix(const LinearMap& map) {
  if (!map.domain().is_full())
    throw Error(ErrorKind::DomainNotFull, "Choi matrix needs a map defined on all of B(H)");
  const Index n = map.dim_h();
  const Index m = map.dim_k();
  ChoiMatrix choi{n, m, ComplexMatrix::Zero(n * m, n * m)};
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      choi.matrix.block(i * m, j * m, m, m) = map.apply_projected(matrix_unit(n, j, i)).transpose();
  choi.matrix = 0.5 * (choi.matrix + choi.matrix.adjoint());
  return choi;
}

LinearMap map_from_choi(const ChoiMatrix& choi, Flavor flavor) {
  const Index n = choi.dim_h;
  const Index m = choi.dim_k;
  if (n <= 0 || m <= 0 || choi.matrix.rows() != n * m || choi.matrix.cols() != n * m)
    throw Error(ErrorKind::BadCompositeDimension, "Choi matrix is not (dim_h*dim_k)-square");
  const ComplexMatrix c = symmetrized(choi.matrix);
  // psi(e_pq) = (block (q, p))^T
  auto unit_image = [&](Index p, Index q) -> ComplexMatrix {
    return c.block(q * m, p * m, m, m).transpose();
  };
  OperatorSystem domain = OperatorSystem::full(n, flavor);
  std::vector<ComplexMatrix> images;
  for (const ComplexMatrix& b : domain.basis()) {
    ComplexMatrix img = ComplexMatrix::Zero(m, m);
    for (Index p = 0; p < n; ++p)
      for (Index q = 0; q < n; ++q)
        if (b(p, q) != Complex{}) img += b(p, q) * unit_image(p, q);
    images.push_back(std::move(img));
  }
  return LinearMap(std::move(domain), m, std::move(images));
}

ComplexMatrix least_norm_choi(const LinearMap& map) {
  const Index n = map.dim_h();
  const Index m = map.dim_k();
  ComplexMatrix c = ComplexMatrix::Zero(n * m, n * m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      c.block(i * m, j * m, m, m) = map.apply_projected(matrix_unit(n, j, i)).transpose();
  return 0.5 * (c + c.adjoint());
}

namespace {

void require_composite(Index n, Index m, const ComplexMatrix& x) {
  if (x.rows() != n * m || x.cols() != n * m)
    throw Error(ErrorKind::DimensionMismatch, "element is not in B(H) (x) B(K)");
}

// M_i = Tr_H((a_i (x) I) x): the B(K) coefficient of a_i in x.
std::vector<ComplexMatrix> product_coefficients(const OperatorSystem& domain, Index m,
                                                const ComplexMatrix& x) {
  const Index n = domain.dim_h();
  std::vector<ComplexMatrix> coeffs;
  for (const ComplexMatrix& a : domain.basis()) {
    ComplexMatrix mi = ComplexMatrix::Zero(m, m);
    for (Index p = 0; p < n; ++p)
      for (Index q = 0; q < n; ++q)
        if (a(p, q) != Complex{}) mi += a(p, q) * x.block(q * m, p * m, m, m);
    coeffs.push_back(std::move(mi));
  }
  return coeffs;
}

ComplexMatrix recombine(const OperatorSystem& domain, const std::vector<ComplexMatrix>& coeffs) {
  const Index m = coeffs.empty() ? 0 : coeffs.front().rows();
  const Index n = domain.dim_h();
  ComplexMatrix out = ComplexMatrix::Zero(n * m, n * m);
  for (std::size_t i = 0; i < coeffs.size(); ++i) out += kron(domain.basis()[i], coeffs[i]);
  return out;
}

}  // namespace

ComplexMatrix project_product_span(const OperatorSystem& domain, Index dim_k, const ComplexMatrix& x) {
  require_composite(domain.dim_h(), dim_k, x);
  return recombine(domain, product_coefficients(domain, dim_k, x));
}

double product_span_distance(const OperatorSystem& domain, Index dim_k, const ComplexMatrix& x) {
  return (x - project_product_span(domain, dim_k, x)).norm();
}

Complex dual_functional(const LinearMap& map, const ComplexMatrix& x) {
  require_composite(map.dim_h(), map.dim_k(), x);
  const auto coeffs = product_coefficients(map.domain(), map.dim_k(), x);
  const double residual = (x - recombine(map.domain(), coeffs)).norm();
  if (residual >= kDomainTol * std::max(1.0, x.norm()))
    throw Error(ErrorKind::NotInProductSpan,
                "element is at distance " + std::to_string(residual) + " from A (x) B(K)");
  // sum_{i,kl} c_{i,kl} Tr(phi(a_i) e_kl^T) = sum_i sum_kl M_i[k,l] phi(a_i)[k,l]
  Complex value{};
  for (std::size_t i = 0; i < coeffs.size(); ++i) value += coeffs[i].cwiseProduct(map.images()[i]).sum();
  return value;
}

double duality_residual(const LinearMap& full_map, const ChoiMatrix& choi) {
  const Index n = full_map.dim_h();
  const Index m = full_map.dim_k();
  double worst = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const ComplexMatrix img = full_map.apply_projected(matrix_unit(n, i, j));
      for (Index k = 0; k < m; ++k)
        for (Index l = 0; l < m; ++l) {
          // Tr(C (e_ij (x) e_kl)) = C[(j,l), (i,k)];  Tr(phi(e_ij) e_kl^T) = phi(e_ij)[k,l]
          const Complex lhs = choi.matrix(j * m + l, i * m + k);
          worst = std::max(worst, std::abs(lhs - img(k, l)));
        }
    }
  return worst;
}

Unitalized unitalize(const LinearMap& map) {
  const Index m = map.dim_k();
  const ComplexMatrix at_one = map.apply(identity(map.dim_h()));
  const HermitianEig eig = hermitian_eig(at_one);
  if (eig.eigenvalues(0) < -kHermitianTol)
    throw Error(ErrorKind::NotPositiveAtIdentity,
                "phi(1) has eigenvalue " + std::to_string(eig.eigenvalues(0)));
  std::vector<Index> kept;
  for (Index k = 0; k < m; ++k)
    if (eig.eigenvalues(k) > kRangeCutoff) kept.push_back(k);
  if (kept.empty()) throw Error(ErrorKind::ZeroMap, "phi(1) vanishes");

  UnitalizationRecord rec;
  rec.compressed_dim = static_cast<Index>(kept.size());
  if (rec.compressed_dim == m) {
    rec.range_basis = identity(m);
    rec.compressed_scaling = eig.eigenvectors *
                             eig.eigenvalues.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                             eig.eigenvectors.adjoint();
    rec.compressed_scaling = hermitian_real_part(rec.compressed_scaling);
  } else {
    rec.range_basis.resize(m, rec.compressed_dim);
    RealVector inv_sqrt(rec.compressed_dim);
    for (Index c = 0; c < rec.compressed_dim; ++c) {
      rec.range_basis.col(c) = eig.eigenvectors.col(kept[static_cast<std::size_t>(c)]);
      inv_sqrt(c) = 1.0 / std::sqrt(eig.eigenvalues(kept[static_cast<std::size_t>(c)]));
    }
    rec.compressed_scaling = inv_sqrt.cast<Complex>().asDiagonal();
  }
  rec.range_projection = rec.range_basis * rec.range_basis.adjoint();
  rec.scaling = rec.range_basis * rec.compressed_scaling * rec.range_basis.adjoint();

  const ComplexMatrix t = rec.range_basis * rec.compressed_scaling;  // m x r
  std::vector<ComplexMatrix> images;
  for (const ComplexMatrix& img : map.images()) images.push_back(t.adjoint() * img * t);
  return {LinearMap(map.domain(), rec.compressed_dim, std::move(images)), std::move(rec)};
}

LinearMap transport_extension(const LinearMap& unital_extension, const UnitalizationRecord& record) {
  if (unital_extension.dim_k() != record.compressed_dim)
    throw Error(ErrorKind::DimensionMismatch, "extension codomain does not match the record");
  const ComplexMatrix t = record.range_basis * record.compressed_scaling.inverse();
  std::vector<ComplexMatrix> images;
  for (const ComplexMatrix& img : unital_extension.images()) images.push_back(t * img * t.adjoint());
  return LinearMap(unital_extension.domain(), record.range_basis.rows(), std::move(images));
}

namespace {

// lambda_min(phi(a)) / ||a|| for a = h - lambda_min(h) 1, h = sum c_k B_k.
double boundary_objective(const LinearMap& map, const RealVector& coords, ComplexMatrix* element) {
  const OperatorSystem& dom = map.domain();
  const ComplexMatrix a = dom.shifted_psd_element(dom.from_coordinates(coords), 0.0);
  const double norm = operator_norm(a);
  if (norm < 1e-12) return std::numeric_limits<double>::infinity();
  if (element) *element = a / norm;
  return min_eigenvalue(map.apply_projected(a)) / norm;
}

}  // namespace

PositivityVerdict check_positive(const LinearMap& map, int budget, std::uint64_t seed,
                                 int restarts) {
  const OperatorSystem& dom = map.domain();
  PositivityVerdict verdict;
  verdict.min_eigenvalue = std::numeric_limits<double>::infinity();

  auto record = [&](const ComplexMatrix& a, double value) {
    if (value < verdict.min_eigenvalue) verdict.min_eigenvalue = value;
    if (value < -kViolationTol && !verdict.witness) verdict.witness = a;
  };

  // Keep the lowest samples as refinement starts.
  std::vector<std::pair<double, RealVector>> starts;
  for (int s = 0; s < budget; ++s) {
    ComplexMatrix a = dom.sample_psd_element(derive_seed(seed, static_cast<std::uint64_t>(s)));
    a /= operator_norm(a);
    const double value = min_eigenvalue(map.apply_projected(a));
    ++verdict.samples_used;
    record(a, value);
    if (verdict.witness) return verdict;
    starts.emplace_back(value, dom.coordinates(a).real());
  }
  std::sort(starts.begin(), starts.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  if (static_cast<int>(starts.size()) > restarts) starts.resize(static_cast<std::size_t>(restarts));

  Rng rng(derive_seed(seed, 0xC0FFEEULL));
  while (static_cast<int>(starts.size()) < restarts)
    starts.emplace_back(0.0, random_real_vector(dom.dimension(), rng));

  detail::SearchOptions options;
  options.initial_step = 0.25;
  options.min_step = 1e-8;
  options.max_evaluations = 3000;
  options.normalize = true;
  auto objective = [&](const RealVector& c) { return boundary_objective(map, c, nullptr); };
  for (auto& start : starts) {
    const detail::SearchResult res = detail::pattern_search(objective, start.second, options, rng);
    verdict.samples_used += res.evaluations;
    ComplexMatrix a;
    const double value = boundary_objective(map, res.x, &a);
    if (std::isfinite(value)) record(a, value);
    if (verdict.witness) break;
  }
  return verdict;
}

namespace {

ComplexVector to_complex_coords(const RealVector& x, bool complex_span) {
  if (!complex_span) return x.cast<Complex>();
  const Index d = x.size() / 2;
  ComplexVector c(d);
  for (Index k = 0; k < d; ++k) c(k) = Complex(x(k), x(d + k));
  return c;
}

RealVector to_search_coords(const ComplexVector& c, bool complex_span) {
  if (!complex_span) return c.real();
  RealVector x(2 * c.size());
  x << c.real(), c.imag();
  return x;
}

}  // namespace

NormEstimate restricted_norm(const LinearMap& map, int restarts, std::uint64_t seed) {
  const OperatorSystem& dom = map.domain();
  const bool complex_span = dom.flavor() == Flavor::Complex;
  const Index dim = complex_span ? 2 * dom.dimension() : dom.dimension();

  auto ratio = [&](const RealVector& x, ComplexMatrix* element) {
    const ComplexVector c = to_complex_coords(x, complex_span);
    const ComplexMatrix a = dom.from_coordinates(c);
    const double na = operator_norm(a);
    if (na < 1e-300) return 0.0;
    if (element) *element = a / na;
    return operator_norm(map.apply_coordinates(c)) / na;
  };

  std::vector<RealVector> starts;
  starts.push_back(RealVector::Unit(dim, 0));  // the identity
  for (const ComplexMatrix& g : dom.generators()) {
    ComplexVector c = dom.coordinates(g);
    if (!complex_span) c = dom.coordinates(hermitian_real_part(g));
    if (c.norm() > 1e-12) starts.push_back(to_search_coords(c, complex_span));
  }
  Rng rng(seed);
  for (int r = 0; r < restarts; ++r) starts.push_back(random_real_vector(dim, rng));

  detail::SearchOptions options;
  options.initial_step = 0.25;
  options.min_step = 1e-10;
  options.max_evaluations = 20000;
  options.normalize = true;

  NormEstimate best;
  best.self_adjoint_only = !complex_span;
  best.lower_bound = -1.0;
  for (const RealVector& start : starts) {
    const detail::SearchResult res =
        detail::pattern_search([&](const RealVector& x) { return -ratio(x, nullptr); }, start,
                               options, rng);
    ComplexMatrix witness;
    const double value = ratio(res.x, &witness);
    if (value > best.lower_bound) {
      best.lower_bound = value;
      best.witness = witness;
    }
  }
  return best;
}

}  // namespace posext
