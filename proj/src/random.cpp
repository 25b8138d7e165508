#include "posext/random.hpp"

#include <cmath>

namespace posext {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double standard_normal(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

ComplexVector random_complex_vector(Index n, Rng& rng) {
  ComplexVector v(n);
  const double s = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) v(i) = Complex(s * standard_normal(rng), s * standard_normal(rng));
  return v;
}

ComplexVector random_unit_vector(Index n, Rng& rng) {
  ComplexVector v = random_complex_vector(n, rng);
  while (v.norm() < 1e-12) v = random_complex_vector(n, rng);
  return v / v.norm();
}

ComplexMatrix random_ginibre(Index rows, Index cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = Complex(s * standard_normal(rng), s * standard_normal(rng));
  return g;
}

ComplexMatrix random_hermitian(Index n, Rng& rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix random_unitary(Index n, Rng& rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

RealVector random_real_vector(Index n, Rng& rng) {
  RealVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = standard_normal(rng);
  return v;
}

}  // namespace posext
