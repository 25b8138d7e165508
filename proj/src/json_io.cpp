#include "posext/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace posext {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

Index positive_index(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) bad(std::string("field '") + key + "' must be a positive integer");
  return static_cast<Index>(v.get<long long>());
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json to_json(const ComplexVector& v) {
  Json data = Json::array();
  for (Index i = 0; i < v.size(); ++i) data.push_back({v(i).real(), v(i).imag()});
  return data;
}

ComplexMatrix matrix_from_json(const Json& j) {
  const Index rows = positive_index(j, "rows");
  const Index cols = positive_index(j, "cols");
  const Json& data = member(j, "data");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
    bad("matrix data must hold rows*cols entries");
  ComplexMatrix m(rows, cols);
  for (Index k = 0; k < rows * cols; ++k) {
    const Json& e = data[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      bad("matrix entries must be [re, im] pairs");
    m(k / cols, k % cols) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  require_finite(m);
  return m;
}

Json to_json(const OperatorSystem& system) {
  Json gens = Json::array();
  for (const ComplexMatrix& g : system.generators()) gens.push_back(to_json(g));
  return Json{{"dim", system.dim_h()}, {"flavor", flavor_name(system.flavor())}, {"generators", std::move(gens)}};
}

OperatorSystem opsys_from_json(const Json& j) {
  const Index dim = positive_index(j, "dim");
  const Json& fl = member(j, "flavor");
  if (!fl.is_string()) bad("flavor must be a string");
  const Flavor flavor = parse_flavor(fl.get<std::string>());
  const Json& gens = member(j, "generators");
  if (!gens.is_array()) bad("generators must be an array");
  std::vector<ComplexMatrix> g;
  for (const Json& e : gens) g.push_back(matrix_from_json(e));
  return OperatorSystem::build(dim, flavor, std::move(g));
}

Json to_json(const LinearMap& map) {
  Json images = Json::array();
  for (const ComplexMatrix& img : map.images()) images.push_back(to_json(img));
  return Json{{"domain", to_json(map.domain())}, {"dim_k", map.dim_k()}, {"images", std::move(images)}};
}

LinearMap map_from_json(const Json& j) {
  OperatorSystem domain = opsys_from_json(member(j, "domain"));
  const Index dim_k = positive_index(j, "dim_k");
  const Json& imgs = member(j, "images");
  if (!imgs.is_array()) bad("images must be an array");
  std::vector<ComplexMatrix> images;
  for (const Json& e : imgs) images.push_back(matrix_from_json(e));
  return LinearMap(std::move(domain), dim_k, std::move(images));
}

Json to_json(const ExtensionResult& r) {
  Json cert{{"kind", r.certificate.kind}};
  if (r.certificate.kind == "psd") {
    cert["choi_eigenvalues"] = r.certificate.choi_eigenvalues;
    cert["min_eigenvalue"] =
        r.certificate.choi_eigenvalues.empty() ? Json(nullptr) : Json(r.certificate.choi_eigenvalues.front());
  } else if (r.certificate.kind == "product-state") {
    cert["product_value"] = finite_or_null(r.certificate.product_value);
    cert["xi"] = to_json(r.certificate.xi);
    cert["eta"] = to_json(r.certificate.eta);
  } else if (r.certificate.kind == "sampled-margins") {
    cert["constraints"] = r.certificate.margins.size();
    cert["min_margin"] = r.certificate.min_margin;
  }
  Json out{{"status", status_name(r.status)}};
  if (r.status != SolveStatus::Feasible) out["stall_distance"] = finite_or_null(r.stall_distance);
  out["iterations"] = r.iterations;
  out["agreement_error"] = r.agreement_error;
  double worst = 0.0;
  for (double x : r.residuals) worst = std::max(worst, x);
  out["max_residual"] = worst;
  out["certificate"] = std::move(cert);
  out["map"] = r.extension ? to_json(*r.extension) : Json(nullptr);
  return out;
}

Json to_json(const CriterionResult& r) {
  Json out{{"verdict", r.verdict == CriterionVerdict::NoExtension ? "no-extension" : "probably-exists"}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  out["norm_lower_bound"] = r.norm_lower_bound;
  out["self_adjoint_only"] = r.self_adjoint_only;
  out["witness"] = r.witness.size() ? to_json(r.witness) : Json(nullptr);
  out["construction"] = r.construction ? to_json(*r.construction) : Json(nullptr);
  return out;
}

Json to_json(const PositivityVerdict& v) {
  return Json{{"verdict", v.violated() ? "violation" : "no-violation-found"},
              {"min_eigenvalue", finite_or_null(v.min_eigenvalue)},
              {"samples", v.samples_used},
              {"witness", v.witness ? to_json(*v.witness) : Json(nullptr)}};
}

Json to_json(const NormEstimate& e) {
  return Json{{"lower_bound", e.lower_bound},
              {"self_adjoint_only", e.self_adjoint_only},
              {"witness", to_json(e.witness)}};
}

Json to_json(const InstanceSpec& s) {
  return Json{{"dim_h", s.dim_h},
              {"dim_k", s.dim_k},
              {"system", system_label(s.system, s.system_param)},
              {"map", map_label(s.map)},
              {"seed", s.seed}};
}

Json to_json(const Instance& inst) {
  Json out{{"spec", to_json(inst.spec)}, {"system", to_json(inst.system)}, {"map", to_json(inst.map)}};
  if (inst.planted_product_value) out["planted_product_value"] = *inst.planted_product_value;
  return out;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad("'" + path + "' is not valid JSON: " + e.what());
  }
}

LinearMap load_map(const std::string& path) {
  const Json j = load_json(path);
  if (j.is_object() && j.contains("map") && j.at("map").is_object()) return map_from_json(j.at("map"));
  return map_from_json(j);
}

ComplexMatrix load_matrix(const std::string& path) { return matrix_from_json(load_json(path)); }

void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) bad("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace posext
