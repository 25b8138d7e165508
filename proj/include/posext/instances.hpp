#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "posext/posmap.hpp"

namespace posext {

enum class SystemKind { Full, Diagonal, ZSystem, Random };
enum class MapKind {
  Identity,
  Transpose,
  Reduction,
  ZMapScaled,
  ZMapUnscaled,
  RandomCpRestriction,
  RandomPositiveRestriction,
};

struct InstanceSpec {
  Index dim_h = 2;
  Index dim_k = 2;
  SystemKind system = SystemKind::Full;
  int system_param = 0;  // n for z_system (must equal dim_h), real dimension for random
  MapKind map = MapKind::Identity;
  std::uint64_t seed = 0;
};

struct Instance {
  InstanceSpec spec;
  OperatorSystem system;
  LinearMap map;
  std::optional<LinearMap> planted;        // full-domain map restricted to obtain `map`
  std::optional<double> planted_product_value;  // block-positivity certificate of the planted Choi
};

/// "full" | "diagonal" | "z:<n>" | "random:<dim>"
SystemKind parse_system_kind(const std::string& s, int& param);
std::string system_label(SystemKind kind, int param);
MapKind parse_map_kind(const std::string& s);
std::string map_label(MapKind kind);

/// diag(1, w, ..., w^{n-1}), w = exp(2 pi i / n).
ComplexMatrix z_matrix(int n);
OperatorSystem z_system(int n);
/// a + b z + c z* -> a 1 + factor (b E12 + c E21) on span{1, z, z*}.
LinearMap z_map(int n, double factor);

/// Deterministic in the spec; throws InvalidSpec on violated invariants.
Instance generate_instance(const InstanceSpec& spec);

}  // namespace posext
