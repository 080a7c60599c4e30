#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "conteq/config.hpp"

namespace conteq {

/// One verified claim in a run report. ref is the short label of the estimate
/// or identity the assertion checks, value the measured quantity, threshold
/// its acceptance bound.
struct CheckResult {
  std::string id;
  std::string ref;
  std::string description;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

nlohmann::json checks_to_json(const std::vector<CheckResult>& checks);

/// The identity suite behind `verify-identities` and the identity-fuzz
/// preset: commutation identities, both trace Laplacian identities, the
/// nonnegativity gap, torsion transfer, and (n >= 2) the model-geometry
/// identity set.
std::vector<CheckResult> run_identity_suite(int n, uint64_t seed, int count);

struct RunResult {
  int exit_code = 0;
  nlohmann::json report;
  std::string output_dir;
};

/// Executes a config end to end and writes run.csv, states/*.json and
/// report.json under output_root/<config.output_dir>.
/// Exit codes: 0 ok, 3 continuation failed on an infinite-time backend,
/// 4 assertion failure.
RunResult run_experiment(const ExperimentConfig& config, const std::string& output_root);

/// Resolves the output root: explicit argument, else the CONTEQ_OUTPUT_ROOT
/// environment variable, else "runs".
std::string resolve_output_root(const std::string& cli_value);

}  // namespace conteq
