#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posext/json_io.hpp"

namespace posext {

enum class SuiteKind { Thm1, Thm2, Arveson, Duality };

SuiteKind parse_suite(const std::string& name);
std::string suite_name(SuiteKind kind);

struct TrialFailure {
  std::uint64_t seed = 0;
  Json instance;  // the generating spec
  std::string diagnostic;
};

struct ExperimentReport {
  SuiteKind suite = SuiteKind::Duality;
  int trials = 0;
  int pass_count = 0;
  std::vector<TrialFailure> failures;
  double wall_time_s = 0.0;
};

struct SuiteConfig {
  Index dim_h = 2;
  Index dim_k = 2;
  bool allow_large = false;  // lift the dim_h <= 4, dim_k <= 3 guard
};

ExperimentReport run_suite(SuiteKind suite, int trials, std::uint64_t seed, const SuiteConfig& config = {});

Json to_json(const ExperimentReport& report);
/// Aligned plain-text summary.
std::string format_table(const ExperimentReport& report);

}  // namespace posext
