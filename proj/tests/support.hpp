#pragma once

// Reference computations written with plain loops, kept away from the
// library code paths they are compared against.

#include <cmath>
#include <complex>

#include "posext/cones.hpp"
#include "posext/posmap.hpp"
#include "posext/random.hpp"

namespace testing_support {

using namespace posext;

inline ComplexMatrix naive_kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  Complex s = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
  return s;
}

inline ComplexMatrix plain_transpose(const ComplexMatrix& m) {
  ComplexMatrix t(m.cols(), m.rows());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

inline ComplexMatrix unit(Index n, Index i, Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

// phi(e_ij) for a full-domain map, assembled entry by entry from the
// Hermitian images through phi(e_ij) = phi(Re) + i phi(Im).
inline ComplexMatrix image_of_unit(const LinearMap& map, Index i, Index j) {
  ComplexMatrix e = unit(map.dim_h(), i, j);
  ComplexMatrix re = (e + e.adjoint()) / 2.0;
  ComplexMatrix im = (e - e.adjoint()) / Complex(0.0, 2.0);
  return map.apply(re) + Complex(0.0, 1.0) * map.apply(im);
}

// C = sum_ij e_ij (x) phi(e_ji)^T, built with explicit indices.
inline ComplexMatrix reference_choi(const LinearMap& map) {
  Index n = map.dim_h(), m = map.dim_k();
  ComplexMatrix c = ComplexMatrix::Zero(n * m, n * m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      ComplexMatrix img = image_of_unit(map, j, i);
      for (Index k = 0; k < m; ++k)
        for (Index l = 0; l < m; ++l) c(i * m + k, j * m + l) = img(l, k);
    }
  return c;
}

inline LinearMap random_full_map(Index n, Index m, Rng& rng) {
  OperatorSystem full = OperatorSystem::full(n);
  std::vector<ComplexMatrix> images;
  for (Index k = 0; k < full.dimension(); ++k) images.push_back(random_hermitian(m, rng));
  return LinearMap(full, m, images);
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Spectrum of a 2x2 Hermitian matrix from the characteristic polynomial.
inline std::pair<double, double> eig2(const ComplexMatrix& m) {
  double a = m(0, 0).real(), d = m(1, 1).real();
  double r = std::sqrt((a - d) * (a - d) / 4.0 + std::norm(m(0, 1)));
  return {(a + d) / 2.0 - r, (a + d) / 2.0 + r};
}

// <xi (x) eta, C xi (x) eta> with indices spelled out.
inline double product_pairing(const ComplexMatrix& c, const ComplexVector& xi, const ComplexVector& eta) {
  Index m = eta.size();
  Complex s = 0.0;
  for (Index i = 0; i < xi.size(); ++i)
    for (Index k = 0; k < m; ++k)
      for (Index j = 0; j < xi.size(); ++j)
        for (Index l = 0; l < m; ++l)
          s += std::conj(xi(i) * eta(k)) * c(i * m + k, j * m + l) * xi(j) * eta(l);
  return s.real();
}

// Brute-force minimum over real-amplitude product vectors with relative
// phases, on a coarse grid; only valid for qubit factors.
inline double grid_product_minimum(const ComplexMatrix& c, int steps) {
  const double pi = std::acos(-1.0);
  double best = 1e300;
  for (int a = 0; a <= steps; ++a)
    for (int p = 0; p < steps; ++p)
      for (int b = 0; b <= steps; ++b)
        for (int q = 0; q < steps; ++q) {
          double ta = pi / 2 * a / steps, tb = pi / 2 * b / steps;
          double pa = 2 * pi * p / steps, pb = 2 * pi * q / steps;
          ComplexVector xi(2), eta(2);
          xi << std::cos(ta), std::polar(std::sin(ta), pa);
          eta << std::cos(tb), std::polar(std::sin(tb), pb);
          best = std::min(best, product_pairing(c, xi, eta));
        }
  return best;
}

}  // namespace testing_support
