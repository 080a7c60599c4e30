#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "conteq/continuity.hpp"

namespace conteq {

/// Validation failure with a field path and, for the text format, the line.
struct ConfigError {
  std::string field;
  std::string message;
  int line = -1;  // -1 when not tied to a source line
  std::string render() const;
};

enum class RunKind { torus, sphere, ot_family, ot_stretched, identity_fuzz };

struct ExperimentConfig {
  std::string name;
  RunKind kind = RunKind::torus;
  Variant variant = Variant::unnormalized;
  int n = 1;              // complex dimension
  int grid_n = 128;       // N per grid axis / sphere cells
  // phi0 specification
  std::string phi0_preset = "zero";  // zero | cos | random
  double phi0_amplitude = 0.3;
  // sphere profile
  double sphere_tau_max = 2.0;
  double sphere_eps = 0.0;
  // schedule
  double t_start = 1e-3;
  double t_end = 1e3;
  int t_count = 20;
  std::string t_spacing = "log";  // log | linear
  bool t_include_zero = true;
  // sampling / fuzz
  int sample_count = 100;
  uint64_t seed = 1;
  // tolerances
  SolverConfig solver;
  // output
  std::string output_dir;
  int checkpoint_count = 20;

  std::vector<double> schedule() const;
  nlohmann::json to_json() const;
};

/// Parses the dotted key = value text format (with # comments) into JSON,
/// tracking source lines for error reporting.
nlohmann::json parse_kv_text(const std::string& text, std::vector<std::pair<std::string, int>>* lines = nullptr);

/// Builds and validates a config from JSON (the alternate input format) or
/// from the text format. Throws ConfigError on the first invalid field.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::vector<std::pair<std::string, int>>* lines = nullptr);
ExperimentConfig load_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// The built-in scenario catalog.
std::vector<ExperimentConfig> catalog();
std::optional<ExperimentConfig> preset(const std::string& name);

}  // namespace conteq
