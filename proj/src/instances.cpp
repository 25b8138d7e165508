#include "posext/instances.hpp"

#include <cmath>
#include <numbers>

#include "posext/cones.hpp"
#include "posext/extend.hpp"
#include "posext/random.hpp"

namespace posext {

namespace {

int parse_positive_int(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidSpec, "bad integer in '" + context + "'");
}

}  // namespace

SystemKind parse_system_kind(const std::string& s, int& param) {
  param = 0;
  if (s == "full") return SystemKind::Full;
  if (s == "diagonal") return SystemKind::Diagonal;
  if (s.rfind("z:", 0) == 0) {
    param = parse_positive_int(s.substr(2), s);
    return SystemKind::ZSystem;
  }
  if (s.rfind("random:", 0) == 0) {
    param = parse_positive_int(s.substr(7), s);
    return SystemKind::Random;
  }
  throw Error(ErrorKind::InvalidSpec, "unknown system kind '" + s + "'");
}

std::string system_label(SystemKind kind, int param) {
  switch (kind) {
    case SystemKind::Full: return "full";
    case SystemKind::Diagonal: return "diagonal";
    case SystemKind::ZSystem: return "z:" + std::to_string(param);
    case SystemKind::Random: return "random:" + std::to_string(param);
  }
  return "?";
}

MapKind parse_map_kind(const std::string& s) {
  if (s == "identity") return MapKind::Identity;
  if (s == "transpose") return MapKind::Transpose;
  if (s == "reduction") return MapKind::Reduction;
  if (s == "zmap_scaled") return MapKind::ZMapScaled;
  if (s == "zmap_unscaled") return MapKind::ZMapUnscaled;
  if (s == "random_cp_restriction") return MapKind::RandomCpRestriction;
  if (s == "random_positive_restriction") return MapKind::RandomPositiveRestriction;
  throw Error(ErrorKind::InvalidSpec, "unknown map kind '" + s + "'");
}

std::string map_label(MapKind kind) {
  switch (kind) {
    case MapKind::Identity: return "identity";
    case MapKind::Transpose: return "transpose";
    case MapKind::Reduction: return "reduction";
    case MapKind::ZMapScaled: return "zmap_scaled";
    case MapKind::ZMapUnscaled: return "zmap_unscaled";
    case MapKind::RandomCpRestriction: return "random_cp_restriction";
    case MapKind::RandomPositiveRestriction: return "random_positive_restriction";
  }
  return "?";
}

ComplexMatrix z_matrix(int n) {
  ComplexMatrix z = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) z(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
  return z;
}

OperatorSystem z_system(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidSpec, "z_system needs n >= 3");
  const ComplexMatrix z = z_matrix(n);
  return OperatorSystem::build(n, Flavor::Complex, {identity(n), z, z.adjoint()});
}

LinearMap z_map(int n, double factor) {
  const ComplexMatrix z = z_matrix(n);
  const ComplexMatrix e12 = matrix_unit(2, 0, 1);
  const ComplexMatrix e21 = matrix_unit(2, 1, 0);
  return LinearMap::from_function(z_system(n), 2, [&](const ComplexMatrix& a) {
    const Complex alpha = a.trace() / double(n);
    const Complex beta = (z.adjoint() * a).trace() / double(n);
    const Complex gamma = (z * a).trace() / double(n);
    return ComplexMatrix(alpha * identity(2) + factor * (beta * e12 + gamma * e21));
  });
}

namespace {

OperatorSystem make_system(const InstanceSpec& spec, Rng& rng) {
  const Index n = spec.dim_h;
  switch (spec.system) {
    case SystemKind::Full:
      return OperatorSystem::full(n);
    case SystemKind::Diagonal: {
      std::vector<ComplexMatrix> gens;
      for (Index i = 0; i < n; ++i) gens.push_back(matrix_unit(n, i, i));
      return OperatorSystem::build(n, Flavor::Complex, gens);
    }
    case SystemKind::ZSystem:
      return z_system(spec.system_param);
    case SystemKind::Random: {
      std::vector<ComplexMatrix> gens{identity(n)};
      for (int k = 1; k < spec.system_param; ++k) gens.push_back(random_hermitian(n, rng));
      return OperatorSystem::build(n, Flavor::Complex, gens);
    }
  }
  throw Error(ErrorKind::InvalidSpec, "unknown system kind");
}

// x -> sum V_r* x V_r (or with x^T) for n x m Kraus operators.
LinearMap rectangular_kraus_map(Index n, Index m, int count, bool transpose_first, Rng& rng) {
  std::vector<ComplexMatrix> kraus;
  for (int r = 0; r < count; ++r) kraus.push_back(random_ginibre(n, m, rng) / std::sqrt(double(n * count)));
  return LinearMap::from_function(OperatorSystem::full(n), m, [&](const ComplexMatrix& x) {
    const ComplexMatrix in = transpose_first ? ComplexMatrix(x.transpose()) : x;
    ComplexMatrix out = ComplexMatrix::Zero(m, m);
    for (const ComplexMatrix& v : kraus) out += v.adjoint() * in * v;
    return out;
  });
}

void validate(const InstanceSpec& spec) {
  if (spec.dim_h < 1 || spec.dim_k < 1) throw Error(ErrorKind::InvalidSpec, "dimensions must be positive");
  if (spec.system == SystemKind::ZSystem) {
    if (spec.system_param < 3) throw Error(ErrorKind::InvalidSpec, "z_system needs n >= 3");
    if (spec.dim_h != spec.system_param)
      throw Error(ErrorKind::InvalidSpec, "z_system(n) lives in M_n; dim_h must equal n");
  }
  if (spec.system == SystemKind::Random &&
      (spec.system_param < 1 || spec.system_param > spec.dim_h * spec.dim_h))
    throw Error(ErrorKind::InvalidSpec, "random(dim) needs 1 <= dim <= dim_h^2");
  const bool zmap = spec.map == MapKind::ZMapScaled || spec.map == MapKind::ZMapUnscaled;
  if (zmap && (spec.system != SystemKind::ZSystem || spec.dim_k != 2))
    throw Error(ErrorKind::InvalidSpec, "z-maps need a z_system domain and dim_k = 2");
  const bool square = spec.map == MapKind::Identity || spec.map == MapKind::Transpose ||
                      spec.map == MapKind::Reduction;
  if (square && spec.dim_k != spec.dim_h)
    throw Error(ErrorKind::InvalidSpec, map_label(spec.map) + " needs dim_k = dim_h");
}

}  // namespace

Instance generate_instance(const InstanceSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const Index n = spec.dim_h;
  const Index m = spec.dim_k;
  OperatorSystem system = make_system(spec, rng);

  std::optional<LinearMap> planted;
  std::optional<double> planted_value;
  switch (spec.map) {
    case MapKind::Identity:
      planted = LinearMap::from_function(OperatorSystem::full(n), n, [](const ComplexMatrix& x) { return x; });
      break;
    case MapKind::Transpose:
      planted = transpose_map(n);
      break;
    case MapKind::Reduction:
      planted = reduction_map(n);
      break;
    case MapKind::ZMapScaled:
    case MapKind::ZMapUnscaled: {
      const double factor =
          spec.map == MapKind::ZMapScaled ? 2.0 * std::cos(std::numbers::pi / spec.system_param) : 2.0;
      return Instance{spec, system, z_map(spec.system_param, factor), std::nullopt, std::nullopt};
    }
    case MapKind::RandomCpRestriction:
      // n*m Kraus operators: generically a Choi matrix of full rank
      planted = rectangular_kraus_map(n, m, static_cast<int>(n * m), false, rng);
      break;
    case MapKind::RandomPositiveRestriction: {
      std::uniform_int_distribution<int> count(1, static_cast<int>(n * m));
      const int cp_count = count(rng);
      const int cocp_count = count(rng);
      const LinearMap cp = rectangular_kraus_map(n, m, cp_count, false, rng);
      const LinearMap cocp = rectangular_kraus_map(n, m, cocp_count, true, rng);
      planted = convex_combination(cp, cocp, uniform(rng, 0.2, 0.8));
      const ProductStateValue pv =
          min_product_state_value(choi_matrix(*planted).matrix, n, m, 16, derive_seed(spec.seed, 0xB10C));
      if (pv.value < -kViolationTol)
        throw Error(ErrorKind::InvalidSpec, "sampled positive map failed its block-positivity check");
      planted_value = pv.value;
      break;
    }
  }
  LinearMap map = planted->restrict_to(system);
  return Instance{spec, std::move(system), std::move(map), std::move(planted), planted_value};
}

}  // namespace posext
