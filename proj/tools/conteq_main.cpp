#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "conteq/config.hpp"
#include "conteq/runner.hpp"

using namespace conteq;

namespace {

ExperimentConfig resolve_config(const std::string& spec) {
  if (auto p = preset(spec)) return *p;
  return load_config_file(spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuity-equation laboratory for Hermitian metrics"};
  app.require_subcommand(1);

  std::string config_spec;
  std::string output_root;

  auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file or preset name");
  run_cmd->add_option("config", config_spec, "config file (key-value or JSON) or preset name")
      ->required();
  run_cmd->add_option("--output-root", output_root, "output root (default: $CONTEQ_OUTPUT_ROOT or ./runs)");

  int vi_n = 2;
  std::uint64_t vi_seed = 1;
  int vi_count = 100;
  auto* verify_cmd = app.add_subcommand("verify-identities", "run the identity suite on sampled points");
  verify_cmd->add_option("--n", vi_n, "complex dimension (model checks need n >= 2)");
  verify_cmd->add_option("--seed", vi_seed, "sample seed");
  verify_cmd->add_option("--count", vi_count, "number of sample points");

  auto* catalog_cmd = app.add_subcommand("catalog", "list the built-in presets");

  std::string validate_spec;
  auto* validate_cmd = app.add_subcommand("validate", "validate a config without running it");
  validate_cmd->add_option("config", validate_spec, "config file or preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const ExperimentConfig c = resolve_config(config_spec);
      const RunResult r = run_experiment(c, resolve_output_root(output_root));
      std::cout << "run '" << c.name << "' -> " << r.output_dir << "\n";
      for (const auto& a : r.report.at("assertions"))
        std::cout << (a.at("passed").get<bool>() ? "  [pass] " : "  [FAIL] ")
                  << a.at("id").get<std::string>() << " (" << a.at("ref").get<std::string>()
                  << ")\n";
      std::cout << r.report.at("passed").get<int>() << " passed, "
                << r.report.at("failed").get<int>() << " failed\n";
      return r.exit_code;
    }
    if (verify_cmd->parsed()) {
      if (vi_n < 1) {
        std::cerr << "config error: n: must be >= 1\n";
        return 2;
      }
      const auto checks = run_identity_suite(vi_n, vi_seed, vi_count);
      if (vi_n < 2)
        std::cout << "note: model-geometry checks skipped (need n >= 2)\n";
      bool all = true;
      for (const auto& c : checks) {
        std::cout << (c.passed ? "[pass] " : "[FAIL] ") << c.id << " (" << c.ref
                  << "): value=" << c.value << " threshold=" << c.threshold << "\n";
        all = all && c.passed;
      }
      std::cout << checks_to_json(checks).dump(2) << "\n";
      return all ? 0 : 4;
    }
    if (catalog_cmd->parsed()) {
      for (const auto& c : catalog()) std::cout << c.name << "\n";
      return 0;
    }
    if (validate_cmd->parsed()) {
      const ExperimentConfig c = resolve_config(validate_spec);
      std::cout << "valid: " << c.name << "\n" << c.to_json().dump(2) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.render() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
