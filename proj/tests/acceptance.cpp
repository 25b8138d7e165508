// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "posext/extend.hpp"
#include "posext/instances.hpp"
#include "support.hpp"

using namespace posext;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome duality() {
  auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    Index n = 2 + t % 2, m = 2 + (t / 2) % 2;
    LinearMap f = random_full_map(n, m, rng);
    ComplexMatrix c = choi_matrix(f).matrix;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        ComplexMatrix fa = image_of_unit(f, i, j);
        for (Index k = 0; k < m; ++k)
          for (Index l = 0; l < m; ++l) {
            ComplexMatrix b = unit(m, k, l);
            Complex lhs = trace_of_product(c, naive_kron(unit(n, i, j), b));
            worst = std::max(worst, std::abs(lhs - trace_of_product(fa, plain_transpose(b))));
          }
      }
  }
  double secs = seconds_since(t0);
  return {worst < 1e-11 && secs < 30.0, "max residual " + num(worst) + ", " + num(secs) + " s"};
}

Outcome round_trip() {
  Rng rng(202);
  double choi_err = 0.0, map_err = 0.0;
  for (int t = 0; t < 500; ++t) {
    Index n = 2 + t % 2, m = 2 + (t / 2) % 2;
    ComplexMatrix c = random_hermitian(n * m, rng);
    choi_err = std::max(choi_err, max_abs_diff(choi_matrix(map_from_choi({n, m, c})).matrix, c));
    LinearMap f = random_full_map(n, m, rng);
    LinearMap g = map_from_choi(choi_matrix(f));
    for (std::size_t k = 0; k < f.images().size(); ++k) map_err = std::max(map_err, max_abs_diff(g.images()[k], f.images()[k]));
  }
  return {choi_err < 1e-11 && map_err < 1e-11, "choi->map->choi " + num(choi_err) + ", map->choi->map " + num(map_err)};
}

Outcome transpose_anchor() {
  ComplexMatrix c = choi_matrix(transpose_map(2)).matrix;
  RealVector ev = hermitian_eig(c).eigenvalues;
  double err = std::abs(ev(0) + 1.0);
  for (int k = 1; k < 4; ++k) err = std::max(err, std::abs(ev(k) - 1.0));
  double v = min_product_state_value(c, 2, 2, 16, 303).value;
  return {err < 1e-10 && std::abs(v) < 1e-8, "spectrum error " + num(err) + ", product minimum " + num(v)};
}

// |<w, target>| / (||w|| ||target||) in Hilbert-Schmidt norm.
double alignment(const ComplexMatrix& w, const ComplexMatrix& target) {
  return std::abs(trace_of_product(target.adjoint(), w)) / (w.norm() * target.norm());
}

Outcome zmap_four() {
  auto t0 = Clock::now();
  LinearMap z = z_map(4, std::sqrt(2.0));
  PositivityVerdict pos = check_positive(z, 10000, 404);
  NormEstimate norm = restricted_norm(z, 16, 404);
  // the maximizers are exactly the multiples of z and of z*; the search may return either
  double align_z = alignment(norm.witness, z_matrix(4));
  double align_zs = alignment(norm.witness, z_matrix(4).adjoint());
  double align = std::max(align_z, align_zs);
  double at_z = operator_norm(z.apply(z_matrix(4)));
  CriterionResult crit = extension_criterion(z, 404);
  int feasible = 0;
  double best = -1e300;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    PositiveOptions opt;
    opt.seed = derive_seed(404, seed);
    ExtensionResult r = extend_positive(z, opt);
    feasible += r.status == SolveStatus::Feasible;
    best = std::max(best, -r.stall_distance);
  }
  double secs = seconds_since(t0);
  bool ok = !pos.violated() && std::abs(norm.lower_bound - std::sqrt(2.0)) <= 1e-6 && align > 1.0 - 1e-6 &&
            std::abs(at_z - std::sqrt(2.0)) <= 1e-6 &&
            crit.verdict == CriterionVerdict::NoExtension && feasible == 0 && secs < 120.0;
  return {ok, std::string(pos.violated() ? "violation found" : "no violation") + " (10000 samples), norm " +
                  std::to_string(norm.lower_bound) + " (ratio at z " + std::to_string(at_z) + "), witness " +
                  (align_z >= align_zs ? "z" : "z*") + " up to scale (alignment " + num(align) + "), " +
                  (crit.verdict == CriterionVerdict::NoExtension ? "no-extension" : "probably-exists") + ", " +
                  std::to_string(feasible) + "/16 seeds feasible (best v " + num(best) + "), " + num(secs) + " s"};
}

Outcome forward_direction() {
  auto t0 = Clock::now();
  int refused = 0, total = 0;
  for (Index dim_h : {2, 3}) {
    for (int t = 0; t < 200; ++t) {
      std::uint64_t seed = derive_seed(505 + dim_h, t);
      Rng rng(seed);
      int full_dim = static_cast<int>(dim_h * dim_h);
      std::uniform_int_distribution<int> dim(2, full_dim - 1);
      Instance inst = generate_instance({dim_h, 2, SystemKind::Random, dim(rng), MapKind::RandomPositiveRestriction, seed});
      refused += extension_criterion(inst.map, seed).verdict == CriterionVerdict::NoExtension;
      ++total;
    }
  }
  double secs = seconds_since(t0);
  return {refused == 0 && secs < 300.0,
          std::to_string(refused) + "/" + std::to_string(total) + " no-extension, " + num(secs) + " s"};
}

Outcome cp_restrictions() {
  int good = 0;
  double worst_eig = 1e300, worst_agree = 0.0;
  for (int t = 0; t < 200; ++t) {
    std::uint64_t seed = derive_seed(606, t);
    Index n = 2 + t % 2;
    Rng rng(seed);
    std::uniform_int_distribution<int> dim(2, static_cast<int>(n * n) - 1);
    Instance inst = generate_instance({n, 2 + (t / 2) % 2, SystemKind::Random, dim(rng), MapKind::RandomCpRestriction, seed});
    ExtensionResult r = extend_cp(inst.map);
    if (r.status != SolveStatus::Feasible || !r.extension) continue;
    double e = min_eigenvalue(reference_choi(*r.extension));
    double a = agreement_error(*r.extension, inst.map);
    worst_eig = std::min(worst_eig, e);
    worst_agree = std::max(worst_agree, a);
    good += e >= -1e-8 && a < 1e-8;
  }
  ExtensionResult t = extend_cp(transpose_map(2));
  bool tr = t.status == SolveStatus::Infeasible && std::abs(t.stall_distance - 1.0) < 1e-3;
  return {good == 200 && tr, std::to_string(good) + "/200 extended (min Choi eigenvalue " + num(worst_eig) +
                                 ", max agreement error " + num(worst_agree) + "), transpose " +
                                 status_name(t.status) + " stall " + num(t.stall_distance)};
}

Outcome cone_reduction() {
  OperatorSystem full = OperatorSystem::full(2);
  MappingCone cp = parse_cone("cp", 2);
  Rng rng(707);
  int disagreements = 0;
  for (int t = 0; t < 500; ++t) {
    ComplexMatrix x = random_hermitian(4, rng) + uniform(rng, -1.0, 3.0) * identity(4);
    bool psd = min_eigenvalue(x) >= -1e-8;
    disagreements += psd == membership_pac(x, full, 2, cp, 8, derive_seed(707, t)).rejected;
  }
  int verdicts = 0, feasible = 0;
  for (int t = 0; t < 50; ++t) {
    std::uint64_t seed = derive_seed(708, t);
    // every fifth instance is a positive map on the full system, whose fiber is a single point
    InstanceSpec spec{2, 2, SystemKind::Random, 2 + t % 2, MapKind::RandomCpRestriction, seed};
    if (t % 5 == 4) spec = {2, 2, SystemKind::Full, 0, MapKind::RandomPositiveRestriction, seed};
    Instance inst = generate_instance(spec);
    bool a = extend_cp(inst.map).status == SolveStatus::Feasible;
    ConeOptions opt;
    opt.seed = seed;
    bool b = extend_c_positive(inst.map, cp, opt).status == SolveStatus::Feasible;
    verdicts += a == b;
    feasible += a;
  }
  return {disagreements == 0 && verdicts == 50,
          std::to_string(disagreements) + "/500 membership disagreements, " + std::to_string(verdicts) +
              "/50 verdicts agree (" + std::to_string(feasible) + " CP-extendable)"};
}

Outcome zmap_three() {
  LinearMap z = z_map(3, 2.0 * std::cos(std::numbers::pi / 3));
  CriterionResult crit = extension_criterion(z, 808);
  int tried = 0;
  bool found = false;
  for (std::uint64_t seed = 0; seed < 16 && !found; ++seed) {
    PositiveOptions opt;
    opt.seed = derive_seed(808, seed);
    ++tried;
    found = extend_positive(z, opt).status == SolveStatus::Feasible;
  }
  return {std::abs(crit.norm_lower_bound - 1.0) < 1e-6 && found,
          "norm " + std::to_string(crit.norm_lower_bound) + ", " +
              (found ? "feasible at seed " + std::to_string(tried) + " of 16" : "no feasible seed among 16")};
}

std::string run_cli(const std::string& args, const std::filesystem::path& out, int& code) {
  std::string cmd = std::string(POSEXT_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  code = std::system(cmd.c_str());
  std::ifstream in(out, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  auto dir = std::filesystem::temp_directory_path() / "posext_acceptance";
  std::filesystem::create_directories(dir);
  int c1 = 0, c2 = 0;
  std::string a = run_cli("verify --suite thm2 --trials 50 --seed 7", dir / "a.txt", c1);
  std::string b = run_cli("verify --suite thm2 --trials 50 --seed 7", dir / "b.txt", c2);
  bool ok = !a.empty() && a == b && c1 == 0 && c2 == 0;
  return {ok, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different") + ", exit codes " +
                  std::to_string(c1) + "/" + std::to_string(c2)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"duality identity", duality},
      {"Choi round trip", round_trip},
      {"transpose spectrum and product minimum", transpose_anchor},
      {"n=4 z-map has no positive extension", zmap_four},
      {"certified-positive restrictions never refused", forward_direction},
      {"CP restrictions extend, transpose stalls at 1", cp_restrictions},
      {"CP cone reduces to the PSD test", cone_reduction},
      {"n=3 z-map boundary case", zmap_three},
      {"verify reports are byte-identical", determinism},
  };
  int failed = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "[" << index << "] " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
