#include "posext/suite.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "posext/random.hpp"

namespace posext {

SuiteKind parse_suite(const std::string& name) {
  if (name == "thm1") return SuiteKind::Thm1;
  if (name == "thm2") return SuiteKind::Thm2;
  if (name == "arveson") return SuiteKind::Arveson;
  if (name == "duality") return SuiteKind::Duality;
  throw Error(ErrorKind::InvalidInput, "unknown suite '" + name + "'");
}

std::string suite_name(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::Thm1: return "thm1";
    case SuiteKind::Thm2: return "thm2";
    case SuiteKind::Arveson: return "arveson";
    case SuiteKind::Duality: return "duality";
  }
  return "?";
}

namespace {

struct TrialOutcome {
  bool pass = true;
  Json instance;
  std::string diagnostic;
};

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

LinearMap random_full_map(Index n, Index m, Rng& rng) {
  const OperatorSystem full = OperatorSystem::full(n);
  std::vector<ComplexMatrix> images;
  for (Index k = 0; k < full.dimension(); ++k) images.push_back(random_hermitian(m, rng));
  return LinearMap(full, m, std::move(images));
}

TrialOutcome duality_trial(const SuiteConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  TrialOutcome out;
  out.instance = Json{{"kind", "random_full_map"}, {"dim_h", cfg.dim_h}, {"dim_k", cfg.dim_k}};
  const LinearMap map = random_full_map(cfg.dim_h, cfg.dim_k, rng);
  const ChoiMatrix choi = choi_matrix(map);
  const double residual = duality_residual(map, choi);
  const LinearMap back = map_from_choi(choi);
  double map_trip = 0.0;
  for (std::size_t k = 0; k < map.images().size(); ++k)
    map_trip = std::max(map_trip, (back.images()[k] - map.images()[k]).cwiseAbs().maxCoeff());
  const double choi_trip = (choi_matrix(back).matrix - choi.matrix).cwiseAbs().maxCoeff();
  if (!(residual < 1e-11 && map_trip < 1e-11 && choi_trip < 1e-11)) {
    out.pass = false;
    out.diagnostic = "residual=" + fmt(residual) + " map_round_trip=" + fmt(map_trip) +
                     " choi_round_trip=" + fmt(choi_trip);
  }
  return out;
}

InstanceSpec random_restriction_spec(const SuiteConfig& cfg, MapKind kind, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x5E1F));
  const int full_dim = static_cast<int>(cfg.dim_h * cfg.dim_h);
  std::uniform_int_distribution<int> dim(2, std::max(2, full_dim - 1));
  InstanceSpec spec;
  spec.dim_h = cfg.dim_h;
  spec.dim_k = cfg.dim_k;
  spec.system = SystemKind::Random;
  spec.system_param = std::min(dim(rng), full_dim);
  spec.map = kind;
  spec.seed = seed;
  return spec;
}

TrialOutcome thm2_trial(const SuiteConfig& cfg, int trial, std::uint64_t seed) {
  TrialOutcome out;
  InstanceSpec spec;
  const bool counterexample = trial == 0;
  if (counterexample) {
    spec.dim_h = 4;
    spec.dim_k = 2;
    spec.system = SystemKind::ZSystem;
    spec.system_param = 4;
    spec.map = MapKind::ZMapScaled;
    spec.seed = seed;
  } else {
    spec = random_restriction_spec(cfg, MapKind::RandomPositiveRestriction, seed);
  }
  out.instance = to_json(spec);
  const Instance inst = generate_instance(spec);
  const CriterionResult r = extension_criterion(inst.map, seed);
  const bool none = r.verdict == CriterionVerdict::NoExtension;
  if (counterexample != none) {
    out.pass = false;
    out.diagnostic = std::string(none ? "no-extension" : "probably-exists") + " norm=" + fmt(r.norm_lower_bound);
    if (!r.reason.empty()) out.diagnostic += " reason=" + r.reason;
  }
  return out;
}

TrialOutcome arveson_trial(const SuiteConfig& cfg, int trial, std::uint64_t seed) {
  TrialOutcome out;
  InstanceSpec spec;
  const bool transpose = trial == 0;
  if (transpose) {
    spec.dim_h = 2;
    spec.dim_k = 2;
    spec.map = MapKind::Transpose;
    spec.seed = seed;
  } else {
    spec = random_restriction_spec(cfg, MapKind::RandomCpRestriction, seed);
  }
  out.instance = to_json(spec);
  const Instance inst = generate_instance(spec);
  SolverOptions opts;
  opts.seed = seed;
  const ExtensionResult r = extend_cp(inst.map, opts);
  const double lmin = r.certificate.choi_eigenvalues.empty() ? NAN : r.certificate.choi_eigenvalues.front();
  if (transpose) {
    if (!(r.status == SolveStatus::Infeasible && std::abs(r.stall_distance - 1.0) < 1e-3)) {
      out.pass = false;
      out.diagnostic = "status=" + status_name(r.status) + " stall=" + fmt(r.stall_distance);
    }
  } else if (!(r.status == SolveStatus::Feasible && lmin >= -1e-8 && r.agreement_error < 1e-8)) {
    out.pass = false;
    out.diagnostic = "status=" + status_name(r.status) + " lambda_min=" + fmt(lmin) +
                     " agreement=" + fmt(r.agreement_error) + " stall=" + fmt(r.stall_distance);
  }
  return out;
}

TrialOutcome thm1_trial(const SuiteConfig& cfg, int trial, std::uint64_t seed) {
  TrialOutcome out;
  const Index n = cfg.dim_h;
  const Index m = cfg.dim_k;
  const MappingCone cp = parse_cone("cp", n);

  // membership under the CP cone versus the direct PSD test
  Rng rng(derive_seed(seed, 0x7E57));
  ComplexMatrix h = random_hermitian(n * m, rng);
  const RealVector ev = hermitian_eig(h).eigenvalues;
  h += (-ev(0) + uniform(rng, -0.25, 0.25) * (ev(ev.size() - 1) - ev(0))) * identity(n * m);
  const PacMembership pm = membership_pac(h, OperatorSystem::full(n), m, cp, 16, derive_seed(seed, 1));
  const bool psd = min_eigenvalue(h) >= -kViolationTol;

  InstanceSpec spec;
  if (trial == 0) {
    spec.dim_h = 2;
    spec.dim_k = 2;
    spec.map = MapKind::Transpose;
    spec.seed = seed;
  } else {
    spec = random_restriction_spec(cfg, MapKind::RandomCpRestriction, seed);
  }
  out.instance = to_json(spec);
  const Instance inst = generate_instance(spec);
  SolverOptions so;
  so.seed = seed;
  const ExtensionResult direct = extend_cp(inst.map, so);
  ConeOptions co;
  co.seed = seed;
  const ExtensionResult sampled = extend_c_positive(inst.map, cp.on(inst.map.dim_h()), co);

  std::ostringstream diag;
  if (pm.rejected == psd) {
    out.pass = false;
    diag << "membership=" << (pm.rejected ? "rejected" : "accepted") << " lambda_min=" << fmt(min_eigenvalue(h)) << ' ';
  }
  const bool same = (direct.status == SolveStatus::Feasible) == (sampled.status == SolveStatus::Feasible);
  if (!same) {
    out.pass = false;
    diag << "extend_cp=" << status_name(direct.status) << " extend_c_positive=" << status_name(sampled.status);
  }
  out.diagnostic = diag.str();
  return out;
}

}  // namespace

ExperimentReport run_suite(SuiteKind suite, int trials, std::uint64_t seed, const SuiteConfig& config) {
  if (trials < 0) throw Error(ErrorKind::InvalidInput, "trials must be non-negative");
  if (config.dim_h < 1 || config.dim_k < 1) throw Error(ErrorKind::InvalidInput, "dimensions must be positive");
  if (!config.allow_large && (config.dim_h > 4 || config.dim_k > 3))
    throw Error(ErrorKind::InvalidInput, "dims exceed the dim_h <= 4, dim_k <= 3 guard");
  ExperimentReport report;
  report.suite = suite;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
    TrialOutcome o;
    switch (suite) {
      case SuiteKind::Duality: o = duality_trial(config, s); break;
      case SuiteKind::Thm2: o = thm2_trial(config, t, s); break;
      case SuiteKind::Arveson: o = arveson_trial(config, t, s); break;
      case SuiteKind::Thm1: o = thm1_trial(config, t, s); break;
    }
    if (o.pass) {
      ++report.pass_count;
    } else {
      report.failures.push_back({s, std::move(o.instance), std::move(o.diagnostic)});
    }
  }
  return report;
}

Json to_json(const ExperimentReport& report) {
  Json failures = Json::array();
  for (const TrialFailure& f : report.failures)
    failures.push_back(Json{{"seed", f.seed}, {"instance", f.instance}, {"diagnostic", f.diagnostic}});
  return Json{{"suite", suite_name(report.suite)},
              {"trials", report.trials},
              {"pass", report.pass_count},
              {"failures", std::move(failures)},
              {"wall_time_s", report.wall_time_s}};
}

std::string format_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "suite" << std::right << std::setw(8) << "trials" << std::setw(8) << "pass"
      << std::setw(10) << "failures" << '\n';
  out << std::left << std::setw(10) << suite_name(report.suite) << std::right << std::setw(8) << report.trials
      << std::setw(8) << report.pass_count << std::setw(10) << report.failures.size() << '\n';
  for (const TrialFailure& f : report.failures)
    out << "  seed " << std::setw(20) << f.seed << "  " << f.diagnostic << '\n';
  return out.str();
}

}  // namespace posext
