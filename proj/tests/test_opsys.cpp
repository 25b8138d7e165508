#include "catch_amalgamated.hpp"

#include "posext/instances.hpp"
#include "posext/opsys.hpp"
#include "posext/random.hpp"
#include "support.hpp"

using namespace posext;
using namespace testing_support;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& err) {
    return err.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidInput;
}

// Rank of the Gram matrix of a family, computed independently of the
// Gram-Schmidt inside OperatorSystem.
Index gram_rank(const std::vector<ComplexMatrix>& family) {
  RealMatrix g(family.size(), family.size());
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j) g(i, j) = trace_of_product(family[i].adjoint(), family[j]).real();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
  Index r = 0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) r += es.eigenvalues()(k) > 1e-9;
  return r;
}

std::vector<OperatorSystem> sample_systems() {
  Rng rng(4);
  std::vector<OperatorSystem> out;
  out.push_back(OperatorSystem::full(2));
  out.push_back(OperatorSystem::full(3, Flavor::RealSelfAdjoint));
  out.push_back(OperatorSystem::build(2, Flavor::RealSelfAdjoint, {identity(2)}));
  out.push_back(z_system(4));
  out.push_back(z_system(3));
  out.push_back(OperatorSystem::build(3, Flavor::RealSelfAdjoint, {identity(3), random_hermitian(3, rng), random_hermitian(3, rng)}));
  return out;
}

}  // namespace

TEST_CASE("scalars", "[opsys]") {
  OperatorSystem s = OperatorSystem::build(2, Flavor::RealSelfAdjoint, {identity(2)});
  REQUIRE(s.dimension() == 1);
  CHECK(max_abs_diff(s.basis()[0], identity(2) / std::sqrt(2.0)) < 1e-15);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 3.0;
  CHECK(max_abs_diff(s.project(m), 2.0 * identity(2)) < 1e-12);
  CHECK_FALSE(s.contains(matrix_unit(2, 0, 1), 1e-9));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ComplexMatrix p = s.sample_psd_element(seed);
    CHECK(std::abs(p(0, 1)) < 1e-14);
    CHECK(std::abs(p(0, 0) - p(1, 1)) < 1e-14);
    CHECK(p(0, 0).real() >= 0.0);
  }
}

TEST_CASE("z system has a three dimensional self-adjoint part", "[opsys]") {
  ComplexMatrix z = z_matrix(4);
  CHECK(std::abs(z(1, 1) - Complex(0.0, 1.0)) < 1e-15);
  OperatorSystem s = OperatorSystem::build(4, Flavor::Complex, {identity(4), z, ComplexMatrix(z.adjoint())});
  ComplexMatrix re = (z + z.adjoint()) / 2.0, im = (z - z.adjoint()) / Complex(0.0, 2.0);
  CHECK(s.dimension() == gram_rank({identity(4), re, im}));
  CHECK(s.dimension() == 3);
  CHECK(s.contains(z, 1e-9));
}

TEST_CASE("construction errors", "[opsys]") {
  CHECK(kind_of([] { OperatorSystem::build(2, Flavor::Complex, {matrix_unit(2, 0, 1)}); }) == ErrorKind::IdentityNotInSpan);
  CHECK(kind_of([] { OperatorSystem::build(2, Flavor::Complex, {identity(2), matrix_unit(2, 0, 1)}); }) ==
        ErrorKind::NotSelfAdjointClosed);
  CHECK(kind_of([] { OperatorSystem::build(2, Flavor::RealSelfAdjoint, {identity(2), matrix_unit(2, 0, 1)}); }) ==
        ErrorKind::NonHermitianGenerator);
  CHECK(kind_of([] { OperatorSystem::build(2, Flavor::RealSelfAdjoint, {identity(3)}); }) == ErrorKind::DimensionMismatch);
  OperatorSystem s = OperatorSystem::full(2);
  CHECK(kind_of([&] { s.project(identity(3)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("generated subalgebras", "[opsys]") {
  ComplexMatrix p = matrix_unit(2, 0, 0);
  OperatorSystem diag = OperatorSystem::from_subalgebra_sa(2, {p});
  CHECK(diag.dimension() == 2);
  CHECK(diag.flavor() == Flavor::RealSelfAdjoint);
  CHECK(diag.contains(matrix_unit(2, 1, 1), 1e-9));
  CHECK_FALSE(diag.contains(matrix_unit(2, 0, 1) + matrix_unit(2, 1, 0), 1e-9));

  std::vector<ComplexMatrix> units;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) units.push_back(matrix_unit(2, i, j));
  CHECK(OperatorSystem::from_subalgebra_sa(2, units).dimension() == 4);

  Rng rng(9);
  ComplexVector v = random_unit_vector(3, rng);
  ComplexMatrix proj = v * v.adjoint();
  OperatorSystem one = OperatorSystem::from_subalgebra_sa(3, {proj});
  CHECK(one.dimension() == 2);
  CHECK(one.contains(proj, 1e-9));
  CHECK(one.contains(identity(3) - proj, 1e-9));
}

TEST_CASE("matrix-unit systems: self-adjoint and complex dimensions agree", "[opsys]") {
  // span{I, E12, E21} in M3 has complex dimension 3.
  OperatorSystem s = OperatorSystem::build(3, Flavor::Complex, {identity(3), matrix_unit(3, 0, 1), matrix_unit(3, 1, 0)});
  CHECK(s.dimension() == 3);
  // span{E11, E22, E33, E12, E21, E13, E31} has complex dimension 7.
  std::vector<ComplexMatrix> g = {matrix_unit(3, 0, 0), matrix_unit(3, 1, 1), matrix_unit(3, 2, 2), matrix_unit(3, 0, 1),
                                  matrix_unit(3, 1, 0), matrix_unit(3, 0, 2), matrix_unit(3, 2, 0)};
  CHECK(OperatorSystem::build(3, Flavor::Complex, g).dimension() == 7);
}

TEST_CASE("basis is orthonormal and Hermitian", "[opsys][property]") {
  for (const OperatorSystem& s : sample_systems()) {
    const auto& b = s.basis();
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(is_hermitian(b[i]));
      for (std::size_t j = 0; j < b.size(); ++j)
        CHECK(std::abs(trace_of_product(b[i], b[j]).real() - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
    CHECK(s.contains(identity(s.dim_h()), 1e-10));
  }
}

TEST_CASE("projection properties", "[opsys][property]") {
  Rng rng(12);
  for (const OperatorSystem& s : sample_systems()) {
    for (int t = 0; t < 1000 / 6; ++t) {
      ComplexMatrix m = random_hermitian(s.dim_h(), rng);
      ComplexMatrix p = s.project(m);
      CHECK(s.contains(p, 1e-9));
      CHECK(max_abs_diff(s.project(p), p) < 1e-12);
      for (const ComplexMatrix& b : s.basis()) CHECK(std::abs(trace_of_product(b, m - p)) < 1e-11);
    }
    RealVector c = random_real_vector(s.dimension(), rng);
    ComplexMatrix in = s.from_coordinates(c);
    CHECK(max_abs_diff(s.project(in), in) < 1e-12);
  }
}

TEST_CASE("combinations of generators are members", "[opsys]") {
  Rng rng(31);
  for (const OperatorSystem& s : sample_systems()) {
    ComplexMatrix m = ComplexMatrix::Zero(s.dim_h(), s.dim_h());
    for (const ComplexMatrix& g : s.generators()) {
      Complex w = s.flavor() == Flavor::Complex ? Complex(standard_normal(rng), standard_normal(rng))
                                                : Complex(standard_normal(rng), 0.0);
      m += w * g;
    }
    CHECK(s.contains(m, 1e-9));
  }
}

TEST_CASE("PSD sampling lands in A+", "[opsys][property]") {
  for (const OperatorSystem& s : sample_systems()) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      ComplexMatrix p = s.sample_psd_element(seed);
      CHECK(s.contains(p, 1e-9));
      CHECK(min_eigenvalue(p) >= -1e-12);
    }
    Rng rng(1);
    ComplexMatrix a = s.from_coordinates(random_real_vector(s.dimension(), rng));
    CHECK(std::abs(min_eigenvalue(s.shifted_psd_element(a, 0.0))) < 1e-10);
  }
}

TEST_CASE("complement is orthogonal to the system", "[opsys]") {
  for (const OperatorSystem& s : sample_systems()) {
    auto comp = s.complement_basis();
    CHECK(static_cast<Index>(comp.size()) + s.dimension() == s.dim_h() * s.dim_h());
    for (const ComplexMatrix& c : comp)
      for (const ComplexMatrix& b : s.basis()) CHECK(std::abs(hs_inner(c, b)) < 1e-10);
  }
}
