#include "catch_amalgamated.hpp"

#include "posext/matrix.hpp"
#include "posext/random.hpp"
#include "support.hpp"

using namespace posext;
using namespace testing_support;
using Catch::Approx;

TEST_CASE("kron of identities and units", "[matrix]") {
  CHECK(max_abs_diff(kron(identity(2), identity(2)), identity(4)) == 0.0);
  ComplexMatrix e = kron(matrix_unit(2, 0, 0), matrix_unit(2, 0, 0));
  CHECK(e(0, 0) == Complex(1.0));
  CHECK(e.cwiseAbs().sum() == 1.0);
}

TEST_CASE("kron matches explicit index formula", "[matrix]") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix a = random_ginibre(3, 2, rng), b = random_ginibre(2, 3, rng);
    CHECK(max_abs_diff(kron(a, b), naive_kron(a, b)) < 1e-15);
    ComplexMatrix c = random_ginibre(3, 3, rng), d = random_ginibre(3, 3, rng);
    CHECK(std::abs(kron(c, d).trace() - c.trace() * d.trace()) < 1e-12);
  }
}

TEST_CASE("eigenvalues of small known matrices", "[matrix]") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  HermitianEig e = hermitian_eig(d);
  CHECK(e.eigenvalues(0) == Approx(1.0));
  CHECK(e.eigenvalues(1) == Approx(2.0));
  CHECK(e.eigenvalues(2) == Approx(3.0));

  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  e = hermitian_eig(x);
  CHECK(e.eigenvalues(0) == Approx(-1.0));
  CHECK(e.eigenvalues(1) == Approx(1.0));
}

TEST_CASE("2x2 spectra agree with the characteristic polynomial", "[matrix]") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    ComplexMatrix h = random_hermitian(2, rng);
    auto [lo, hi] = eig2(h);
    RealVector ev = hermitian_eig(h).eigenvalues;
    CHECK(std::abs(ev(0) - lo) < 1e-12);
    CHECK(std::abs(ev(1) - hi) < 1e-12);
  }
}

TEST_CASE("eigendecomposition reconstructs and is unitary", "[matrix][property]") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    Index n = 1 + t % 8;
    ComplexMatrix h = random_hermitian(n, rng);
    HermitianEig e = hermitian_eig(h);
    double scale = 1.0 + e.eigenvalues.cwiseAbs().maxCoeff();
    ComplexMatrix rec = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
    CHECK(max_abs_diff(rec, h) < 1e-10 * scale);
    CHECK(max_abs_diff(e.eigenvectors.adjoint() * e.eigenvectors, identity(n)) < 1e-10);
    for (Index i = 1; i < n; ++i) CHECK(e.eigenvalues(i - 1) <= e.eigenvalues(i));
    CHECK(std::abs(e.eigenvalues.sum() - h.trace().real()) < 1e-10);
  }
}

TEST_CASE("non-Hermitian input is refused", "[matrix]") {
  ComplexMatrix m = matrix_unit(2, 0, 1);
  REQUIRE_THROWS_AS(hermitian_eig(m), Error);
  try {
    psd_project(m);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NonHermitianInput);
  }
  ComplexMatrix tiny = identity(2);
  tiny(0, 1) = 1e-12;
  CHECK_NOTHROW(hermitian_eig(tiny));
}

TEST_CASE("PSD projection", "[matrix]") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  ComplexMatrix p = psd_project(d);
  CHECK(std::abs(p(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(p(1, 1)) < 1e-12);

  Rng rng(8);
  for (int t = 0; t < 1000; ++t) {
    Index n = 1 + t % 8;
    ComplexMatrix h = random_hermitian(n, rng);
    ComplexMatrix ph = psd_project(h);
    CHECK(max_abs_diff(psd_project(ph), ph) < 1e-12);
    CHECK(max_abs_diff(ph - psd_project(-h), h) < 1e-10);
    CHECK(min_eigenvalue(ph) > -1e-12);
    ComplexMatrix g = random_ginibre(n, n, rng);
    ComplexMatrix psd = g * g.adjoint();
    CHECK(max_abs_diff(psd_project(psd), psd) < 1e-12 * (1.0 + psd.norm()));
  }
}

TEST_CASE("operator and trace norms", "[matrix]") {
  CHECK(operator_norm(matrix_unit(2, 0, 1)) == Approx(1.0));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  CHECK(operator_norm(d) == Approx(2.0));
  CHECK(trace_norm(d) == Approx(3.0));

  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    Index n = 1 + t % 6;
    CHECK(trace_norm(random_unitary(n, rng)) == Approx(static_cast<double>(n)).epsilon(1e-12));
    ComplexMatrix a = random_ginibre(2, 2, rng), b = random_ginibre(3, 3, rng);
    CHECK(std::abs(operator_norm(kron(a, b)) - operator_norm(a) * operator_norm(b)) < 1e-10);
    ComplexMatrix g = random_ginibre(n, n, rng);
    ComplexMatrix psd = g * g.adjoint();
    CHECK(std::abs(trace_norm(psd) - psd.trace().real()) < 1e-12 * (1.0 + psd.norm()));
    ComplexMatrix m = random_ginibre(n, n, rng);
    CHECK(operator_norm(m) <= trace_norm(m) + 1e-12);
    CHECK(trace_norm(m) <= n * operator_norm(m) + 1e-12);
  }
}

TEST_CASE("real coordinates are an isometry", "[matrix][property]") {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    Index n = 1 + t % 5;
    ComplexMatrix a = random_hermitian(n, rng), b = random_hermitian(n, rng);
    CHECK(std::abs(to_real_coords(a).dot(to_real_coords(b)) - trace_of_product(a, b).real()) < 1e-11);
    CHECK(max_abs_diff(from_real_coords(to_real_coords(a), n), a) < 1e-14);
  }
  auto basis = hermitian_basis(3);
  REQUIRE(basis.size() == 9);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      CHECK(std::abs(hs_inner(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-14);
}

TEST_CASE("non-finite entries are rejected", "[matrix]") {
  ComplexMatrix m = identity(2);
  m(0, 0) = std::nan("");
  try {
    require_finite(m);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NonFiniteEntry);
  }
}
