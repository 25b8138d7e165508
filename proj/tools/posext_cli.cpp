// posext command-line interface.
//
// Exit codes: 0 success or positive verdict, 1 negative verdict, 2 invalid input.
#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "posext/json_io.hpp"
#include "posext/suite.hpp"

using namespace posext;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInvalid = 2;

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    save_json(j, out_path);
  }
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive and cone-positive extensions of maps on operator systems"};
  app.require_subcommand(1);

  std::string map_path, x_path, out_path, cone_spec = "cp", mode = "cp";
  std::uint64_t seed = 0;
  int budget = -1, restarts = -1, max_iter = 100000;
  double tol = 1e-10;
  bool require_construction = false;

  auto* choi = app.add_subcommand("choi", "Choi matrix of a full-domain map (exit 0)");
  choi->add_option("--map", map_path, "map JSON")->required();
  choi->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* dual = app.add_subcommand("dual", "dual functional of a map at x in A (x) B(K) (exit 0)");
  dual->add_option("--map", map_path, "map JSON")->required();
  dual->add_option("--x", x_path, "matrix JSON")->required();

  auto* chk = app.add_subcommand("check-positive", "search for a positivity violation (exit 1 if found)");
  chk->add_option("--map", map_path, "map JSON")->required();
  chk->add_option("--budget", budget, "random samples (default 1000)");
  chk->add_option("--restarts", restarts, "local refinements (default 64)");
  chk->add_option("--seed", seed, "random seed (default 0)");

  auto* cpos = app.add_subcommand("check-cpos", "search for a cone-positivity violation (exit 1 if found)");
  cpos->add_option("--map", map_path, "map JSON")->required();
  cpos->add_option("--cone", cone_spec, "cp | cocp | dec | pos | kpos:k")->required();
  cpos->add_option("--budget", budget, "sampled elements (default 200)");
  cpos->add_option("--seed", seed, "random seed (default 0)");

  auto* norm = app.add_subcommand("norm", "lower bound on the norm of a map on its domain (exit 0)");
  norm->add_option("--map", map_path, "map JSON")->required();
  norm->add_option("--restarts", restarts, "random restarts (default 16)");
  norm->add_option("--seed", seed, "random seed (default 0)");

  auto* crit = app.add_subcommand(
      "criterion", "norm criterion for a positive extension (exit 0 probably-exists, 1 no-extension or inconclusive)");
  crit->add_option("--map", map_path, "map JSON")->required();
  crit->add_option("--restarts", restarts, "norm search restarts (default 16)");
  crit->add_option("--seed", seed, "random seed (default 0)");
  crit->add_flag("--require-construction", require_construction,
                 "report inconclusive (exit 1) when no extension is constructed");

  auto* ext = app.add_subcommand("extend", "construct an extension (exit 0 feasible, 1 otherwise)");
  ext->add_option("--map", map_path, "map JSON")->required();
  ext->add_option("--mode", mode, "cp | positive | cone")->check(CLI::IsMember({"cp", "positive", "cone"}));
  ext->add_option("--cone", cone_spec, "cone for --mode cone (default cp)");
  ext->add_option("--budget", budget, "sampled half-spaces for --mode cone (default 200)");
  ext->add_option("--restarts", restarts, "multistarts for --mode positive (default 64)");
  ext->add_option("--max-iter", max_iter, "iteration cap (default 100000)");
  ext->add_option("--tol", tol, "successive-iterate tolerance (default 1e-10)");
  ext->add_option("--seed", seed, "random seed (default 0)");
  ext->add_option("--out", out_path, "write JSON here instead of stdout");

  InstanceSpec spec;
  std::string system_kind = "full", map_kind = "identity";
  int dim_h = 2, dim_k = 2;
  auto* gen = app.add_subcommand("gen", "generate an instance (exit 0)");
  gen->add_option("--dim-h", dim_h, "dimension of H (default 2)");
  gen->add_option("--dim-k", dim_k, "dimension of K (default 2)");
  gen->add_option("--system", system_kind, "full | diagonal | z:<n> | random:<dim>");
  gen->add_option("--map", map_kind,
                  "identity | transpose | reduction | zmap_scaled | zmap_unscaled | random_cp_restriction | "
                  "random_positive_restriction");
  gen->add_option("--seed", seed, "random seed (default 0)");
  gen->add_option("--out", out_path, "write JSON here instead of stdout");

  std::string suite = "duality";
  int trials = 10;
  bool allow_large = false, timing = false;
  auto* verify = app.add_subcommand("verify", "run a verification suite (exit 0 iff no failures)");
  verify->add_option("--suite", suite, "thm1 | thm2 | arveson | duality")->required();
  verify->add_option("--trials", trials, "number of trials (default 10)");
  verify->add_option("--seed", seed, "random seed (default 0)");
  verify->add_option("--dim-h", dim_h, "dimension of H (default 2)");
  verify->add_option("--dim-k", dim_k, "dimension of K (default 2)");
  verify->add_flag("--allow-large", allow_large, "lift the dim_h <= 4, dim_k <= 3 guard");
  verify->add_flag("--timing", timing, "record wall time in the report (breaks byte-identical output)");
  verify->add_option("--out", out_path, "write the JSON report here (default: stdout after the table)");

  int zn = 4;
  auto* demo = app.add_subcommand("demo", "worked examples");
  auto* zmap = demo->add_subcommand("zmap", "the z-map on span{1, z, z*} (exit 1 when no extension exists)");
  demo->require_subcommand(1);
  zmap->add_option("--n", zn, "size of z (>= 3, default 4)");
  zmap->add_option("--seed", seed, "random seed (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*choi) {
      emit(to_json(choi_matrix(load_map(map_path)).matrix), out_path);
      return kOk;
    }
    if (*dual) {
      const LinearMap map = load_map(map_path);
      std::cout << Json{{"value", complex_json(dual_functional(map, load_matrix(x_path)))}}.dump(2) << '\n';
      return kOk;
    }
    if (*chk) {
      const PositivityVerdict v =
          check_positive(load_map(map_path), budget < 0 ? 1000 : budget, seed, restarts < 0 ? 64 : restarts);
      std::cout << to_json(v).dump(2) << '\n';
      return v.violated() ? kNegative : kOk;
    }
    if (*cpos) {
      const LinearMap map = load_map(map_path);
      const MappingCone cone = parse_cone(cone_spec, map.dim_h());
      const CPositivityVerdict v = check_c_positive(map, cone, budget < 0 ? 200 : budget, seed);
      Json j{{"cone", cone_label(cone)},
             {"verdict", v.violated() ? "violation" : "no-violation-found"},
             {"value", v.value},
             {"samples", v.samples},
             {"violation", v.violation ? to_json(*v.violation) : Json(nullptr)}};
      std::cout << j.dump(2) << '\n';
      return v.violated() ? kNegative : kOk;
    }
    if (*norm) {
      std::cout << to_json(restricted_norm(load_map(map_path), restarts < 0 ? 16 : restarts, seed)).dump(2) << '\n';
      return kOk;
    }
    if (*crit) {
      CriterionOptions opts;
      if (restarts >= 0) opts.norm_restarts = restarts;
      const CriterionResult r = extension_criterion(load_map(map_path), seed, opts);
      Json j = to_json(r);
      bool negative = r.verdict == CriterionVerdict::NoExtension;
      if (!negative && require_construction && !r.constructed()) {
        j["verdict"] = "inconclusive";
        negative = true;
      }
      std::cout << j.dump(2) << '\n';
      return negative ? kNegative : kOk;
    }
    if (*ext) {
      const LinearMap map = load_map(map_path);
      ExtensionResult r;
      if (mode == "cp") {
        r = extend_cp(map, {max_iter, tol, seed});
      } else if (mode == "positive") {
        PositiveOptions po;
        po.seed = seed;
        if (restarts >= 0) po.restarts = restarts;
        r = extend_positive(map, po);
      } else {
        ConeOptions co;
        co.seed = seed;
        co.max_iterations = max_iter;
        co.residual_tolerance = tol;
        if (budget >= 0) co.sample_budget = budget;
        r = extend_c_positive(map, parse_cone(cone_spec, map.dim_h()), co);
      }
      emit(to_json(r), out_path);
      return r.status == SolveStatus::Feasible ? kOk : kNegative;
    }
    if (*gen) {
      spec.dim_h = dim_h;
      spec.dim_k = dim_k;
      spec.system = parse_system_kind(system_kind, spec.system_param);
      spec.map = parse_map_kind(map_kind);
      spec.seed = seed;
      emit(to_json(generate_instance(spec)), out_path);
      return kOk;
    }
    if (*verify) {
      SuiteConfig cfg{dim_h, dim_k, allow_large};
      const auto start = std::chrono::steady_clock::now();
      ExperimentReport report = run_suite(parse_suite(suite), trials, seed, cfg);
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (timing) report.wall_time_s = elapsed;
      std::cerr << "wall time " << elapsed << " s\n";
      std::cout << format_table(report);
      if (out_path.empty()) {
        std::cout << to_json(report).dump(2) << '\n';
      } else {
        save_json(to_json(report), out_path);
      }
      return report.failures.empty() ? kOk : kNegative;
    }
    if (*zmap) {
      if (zn < 3) throw Error(ErrorKind::InvalidSpec, "--n must be at least 3");
      const LinearMap map = z_map(zn, 2.0 * std::cos(std::numbers::pi / zn));
      const PositivityVerdict pos = check_positive(map, 1000, seed);
      const CriterionResult r = extension_criterion(map, seed);
      Json j{{"n", zn},
             {"factor", 2.0 * std::cos(std::numbers::pi / zn)},
             {"positivity", to_json(pos)},
             {"criterion", to_json(r)}};
      std::cout << j.dump(2) << '\n';
      return r.verdict == CriterionVerdict::NoExtension ? kNegative : kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
