#pragma once

#include <string>

#include "posext/extend.hpp"
#include "posext/instances.hpp"
#include "json.hpp"

namespace posext {

using Json = nlohmann::ordered_json;

Json to_json(const ComplexMatrix& m);
Json to_json(const ComplexVector& v);
Json to_json(const OperatorSystem& system);
Json to_json(const LinearMap& map);
Json to_json(const ExtensionResult& result);
Json to_json(const CriterionResult& result);
Json to_json(const PositivityVerdict& verdict);
Json to_json(const NormEstimate& estimate);
Json to_json(const InstanceSpec& spec);
Json to_json(const Instance& instance);

ComplexMatrix matrix_from_json(const Json& j);
OperatorSystem opsys_from_json(const Json& j);
LinearMap map_from_json(const Json& j);

/// Reads either a bare map or an object with a "map" member (as written by `gen`).
LinearMap load_map(const std::string& path);
ComplexMatrix load_matrix(const std::string& path);
Json load_json(const std::string& path);
void save_json(const Json& j, const std::string& path);

}  // namespace posext
