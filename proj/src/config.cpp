#include "conteq/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace conteq {

using nlohmann::json;

std::string ConfigError::render() const {
  std::ostringstream os;
  os << "config error";
  if (line >= 0) os << " (line " << line << ")";
  os << ": " << field << ": " << message;
  return os.str();
}

std::vector<double> ExperimentConfig::schedule() const {
  if (t_spacing == "linear") {
    std::vector<double> t;
    if (t_include_zero && t_start > 0.0) t.push_back(0.0);
    for (int i = 0; i < t_count; ++i)
      t.push_back(t_start + (t_end - t_start) * i / std::max(1, t_count - 1));
    return t;
  }
  return log_schedule(t_start, t_end, t_count, t_include_zero);
}

json ExperimentConfig::to_json() const {
  json j;
  j["name"] = name;
  j["backend"] = kind == RunKind::torus         ? "torus"
                 : kind == RunKind::sphere      ? "sphere"
                 : kind == RunKind::ot_family   ? "ot-explicit"
                 : kind == RunKind::ot_stretched ? "ot-stretched"
                                                 : "identity-fuzz";
  j["variant"] = variant == Variant::normalized ? "normalized" : "unnormalized";
  j["n"] = n;
  j["grid"]["N"] = grid_n;
  j["phi0"]["preset"] = phi0_preset;
  j["phi0"]["amplitude"] = phi0_amplitude;
  j["sphere"]["tau_max"] = sphere_tau_max;
  j["sphere"]["eps"] = sphere_eps;
  j["t"]["start"] = t_start;
  j["t"]["end"] = t_end;
  j["t"]["count"] = t_count;
  j["t"]["spacing"] = t_spacing;
  j["t"]["include_zero"] = t_include_zero;
  j["samples"] = sample_count;
  j["seed"] = seed;
  j["solver"]["newton_tol"] = solver.newton_tol;
  j["solver"]["max_newton"] = solver.max_newton;
  j["output"] = output_dir;
  j["checkpoints"] = checkpoint_count;
  return j;
}

json parse_kv_text(const std::string& text, std::vector<std::pair<std::string, int>>* lines) {
  json root = json::object();
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError{"<line>", "expected 'key = value'", lineno};
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError{"<line>", "empty key", lineno};
    // descend dotted path
    json* node = &root;
    std::string path;
    size_t pos = 0;
    while (true) {
      const auto dot = key.find('.', pos);
      const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
      path += (path.empty() ? "" : ".") + part;
      if (dot == std::string::npos) {
        // parse scalar: number, bool, else string
        json v;
        try {
          size_t used = 0;
          const double d = std::stod(value, &used);
          if (used == value.size()) {
            v = d;
          } else {
            throw std::invalid_argument("not a number");
          }
        } catch (...) {
          if (value == "true")
            v = true;
          else if (value == "false")
            v = false;
          else
            v = value;
        }
        (*node)[part] = v;
        break;
      }
      node = &((*node)[part]);
      pos = dot + 1;
    }
    if (lines) lines->push_back({key, lineno});
  }
  return root;
}

namespace {

int line_of(const std::vector<std::pair<std::string, int>>* lines, const std::string& key) {
  if (!lines) return -1;
  for (const auto& [k, l] : *lines)
    if (k == key) return l;
  return -1;
}

template <typename T>
T get_or(const json& j, const std::string& dotted, T fallback,
         const std::vector<std::pair<std::string, int>>* lines) {
  const json* node = &j;
  size_t pos = 0;
  while (true) {
    const auto dot = dotted.find('.', pos);
    const std::string part = dotted.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (!node->contains(part)) return fallback;
    node = &node->at(part);
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  try {
    return node->get<T>();
  } catch (const json::exception&) {
    throw ConfigError{dotted, "has the wrong type", line_of(lines, dotted)};
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& j, const std::vector<std::pair<std::string, int>>* lines) {
  ExperimentConfig c;
  c.name = get_or<std::string>(j, "name", "unnamed", lines);

  const std::string backend = get_or<std::string>(j, "backend", "torus", lines);
  if (backend == "torus")
    c.kind = RunKind::torus;
  else if (backend == "sphere")
    c.kind = RunKind::sphere;
  else if (backend == "ot-explicit")
    c.kind = RunKind::ot_family;
  else if (backend == "ot-stretched")
    c.kind = RunKind::ot_stretched;
  else if (backend == "identity-fuzz")
    c.kind = RunKind::identity_fuzz;
  else
    throw ConfigError{"backend",
                      "unknown backend '" + backend +
                          "' (torus | sphere | ot-explicit | ot-stretched | identity-fuzz)",
                      line_of(lines, "backend")};

  const std::string variant = get_or<std::string>(j, "variant", "unnormalized", lines);
  if (variant == "normalized")
    c.variant = Variant::normalized;
  else if (variant == "unnormalized")
    c.variant = Variant::unnormalized;
  else
    throw ConfigError{"variant", "must be 'normalized' or 'unnormalized'", line_of(lines, "variant")};

  c.n = static_cast<int>(get_or<double>(j, "n", 1, lines));
  if (c.n < 1) throw ConfigError{"n", "complex dimension must be >= 1", line_of(lines, "n")};
  if ((c.kind == RunKind::ot_family || c.kind == RunKind::ot_stretched) && c.n < 2)
    throw ConfigError{"n", "model-geometry runs need n >= 2", line_of(lines, "n")};
  if (c.kind == RunKind::torus && c.n > 2)
    throw ConfigError{"n", "the torus backend supports n = 1 (full grid) or n = 2 (re-slice)",
                      line_of(lines, "n")};
  if (c.kind == RunKind::sphere && c.n != 1)
    throw ConfigError{"n", "the sphere backend is one-dimensional", line_of(lines, "n")};

  c.grid_n = static_cast<int>(get_or<double>(j, "grid.N", 128, lines));
  if (c.grid_n < 8) throw ConfigError{"grid.N", "grid too small (need N >= 8)", line_of(lines, "grid.N")};

  c.phi0_preset = get_or<std::string>(j, "phi0.preset", "zero", lines);
  if (c.phi0_preset != "zero" && c.phi0_preset != "cos" && c.phi0_preset != "random")
    throw ConfigError{"phi0.preset", "must be zero | cos | random", line_of(lines, "phi0.preset")};
  c.phi0_amplitude = get_or<double>(j, "phi0.amplitude", 0.3, lines);
  if (std::abs(c.phi0_amplitude) > 0.9)
    throw ConfigError{"phi0.amplitude", "amplitude too large for positivity of omega_0",
                      line_of(lines, "phi0.amplitude")};

  c.sphere_tau_max = get_or<double>(j, "sphere.tau_max", 2.0, lines);
  if (c.sphere_tau_max <= 0.0)
    throw ConfigError{"sphere.tau_max", "must be positive", line_of(lines, "sphere.tau_max")};
  c.sphere_eps = get_or<double>(j, "sphere.eps", 0.0, lines);

  c.t_start = get_or<double>(j, "t.start", 1e-3, lines);
  c.t_end = get_or<double>(j, "t.end", 1e3, lines);
  c.t_count = static_cast<int>(get_or<double>(j, "t.count", 20, lines));
  c.t_spacing = get_or<std::string>(j, "t.spacing", "log", lines);
  c.t_include_zero = get_or<bool>(j, "t.include_zero", true, lines);
  if (c.t_spacing != "log" && c.t_spacing != "linear")
    throw ConfigError{"t.spacing", "must be 'log' or 'linear'", line_of(lines, "t.spacing")};
  if (c.t_count < 1) throw ConfigError{"t.count", "need at least one parameter value", line_of(lines, "t.count")};
  if (!(c.t_end >= c.t_start))
    throw ConfigError{"t.end", "schedule must be increasing (t.end >= t.start)", line_of(lines, "t.end")};
  if (c.t_spacing == "log" && !(c.t_start > 0.0))
    throw ConfigError{"t.start", "log spacing needs t.start > 0", line_of(lines, "t.start")};

  c.sample_count = static_cast<int>(get_or<double>(j, "samples", 100, lines));
  if (c.sample_count < 1) throw ConfigError{"samples", "must be >= 1", line_of(lines, "samples")};
  c.seed = static_cast<uint64_t>(get_or<double>(j, "seed", 1, lines));

  c.solver.newton_tol = get_or<double>(j, "solver.newton_tol", 1e-10, lines);
  c.solver.max_newton = static_cast<int>(get_or<double>(j, "solver.max_newton", 30, lines));
  if (c.solver.newton_tol <= 0.0)
    throw ConfigError{"solver.newton_tol", "must be positive", line_of(lines, "solver.newton_tol")};
  if (c.solver.max_newton < 1)
    throw ConfigError{"solver.max_newton", "must be >= 1", line_of(lines, "solver.max_newton")};

  c.output_dir = get_or<std::string>(j, "output", c.name, lines);
  c.checkpoint_count = static_cast<int>(get_or<double>(j, "checkpoints", 20, lines));
  c.solver.t_schedule = c.schedule();
  return c;
}

ExperimentConfig load_config_text(const std::string& text) {
  // JSON is accepted as the alternate input; detect by the first non-space char.
  for (char ch : text) {
    if (ch == ' ' || ch == '\n' || ch == '\t' || ch == '\r') continue;
    if (ch == '{') {
      return config_from_json(json::parse(text));
    }
    break;
  }
  std::vector<std::pair<std::string, int>> lines;
  const json j = parse_kv_text(text, &lines);
  return config_from_json(j, &lines);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError{"<file>", "cannot open '" + path + "'", -1};
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str());
}

std::vector<ExperimentConfig> catalog() {
  std::vector<ExperimentConfig> out;
  {
    ExperimentConfig c;
    c.name = "torus-flat";
    c.kind = RunKind::torus;
    c.variant = Variant::unnormalized;
    c.n = 1;
    c.grid_n = 64;
    c.phi0_preset = "zero";
    c.t_start = 1e-3;
    c.t_end = 1e3;
    c.t_count = 12;
    c.output_dir = c.name;
    c.solver.t_schedule = c.schedule();
    out.push_back(c);
  }
  {
    ExperimentConfig c;
    c.name = "torus-perturbed";
    c.kind = RunKind::torus;
    c.variant = Variant::normalized;
    c.n = 1;
    c.grid_n = 128;
    c.phi0_preset = "cos";
    c.phi0_amplitude = 0.3;
    c.t_start = 1e-3;
    c.t_end = 1e3;
    c.t_count = 25;
    c.output_dir = c.name;
    c.solver.t_schedule = c.schedule();
    out.push_back(c);
  }
  {
    ExperimentConfig c;
    c.name = "sphere-blowup";
    c.kind = RunKind::sphere;
    c.variant = Variant::unnormalized;
    c.n = 1;
    c.grid_n = 256;
    c.sphere_tau_max = 2.0;
    c.sphere_eps = 0.0;
    c.t_spacing = "linear";
    c.t_start = 0.05;
    c.t_end = 1.05;
    c.t_count = 21;
    c.output_dir = c.name;
    c.solver.t_schedule = c.schedule();
    out.push_back(c);
  }
  {
    ExperimentConfig c;
    c.name = "sphere-perturbed";
    c.kind = RunKind::sphere;
    c.variant = Variant::unnormalized;
    c.n = 1;
    c.grid_n = 256;
    c.sphere_tau_max = 2.0;
    c.sphere_eps = 0.2;
    c.t_spacing = "linear";
    c.t_start = 0.05;
    c.t_end = 1.05;
    c.t_count = 21;
    c.output_dir = c.name;
    c.solver.t_schedule = c.schedule();
    out.push_back(c);
  }
  {
    ExperimentConfig c;
    c.name = "ot-explicit-family";
    c.kind = RunKind::ot_family;
    c.variant = Variant::normalized;
    c.n = 2;
    c.t_start = 0.1;
    c.t_end = 1e3;
    c.t_count = 19;
    c.t_include_zero = true;  // 20 values including t = 0
    c.sample_count = 100;
    c.output_dir = c.name;
    c.solver.t_schedule = c.schedule();
    out.push_back(c);
  }
  {
    ExperimentConfig c;
    c.name = "ot-stretched-calabi";
    c.kind = RunKind::ot_stretched;
    c.variant = Variant::normalized;
    c.n = 2;
    c.t_start = 1.0;
    c.t_end = 1e3;
    c.t_count = 20;
    c.t_include_zero = false;
    c.sample_count = 200;
    c.output_dir = c.name;
    c.solver.t_schedule = c.schedule();
    out.push_back(c);
  }
  {
    ExperimentConfig c;
    c.name = "identity-fuzz";
    c.kind = RunKind::identity_fuzz;
    c.n = 2;
    c.sample_count = 100;
    c.seed = 7;
    c.output_dir = c.name;
    c.solver.t_schedule = c.schedule();
    out.push_back(c);
  }
  return out;
}

std::optional<ExperimentConfig> preset(const std::string& name) {
  for (auto& c : catalog())
    if (c.name == name) return c;
  return std::nullopt;
}

}  // namespace conteq
