#include "rnf/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace rnf {

namespace {

std::string trim(const std::string& s) {
  const auto first = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  const auto last = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  return first < last ? std::string(first, last) : std::string();
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

long parse_int(const std::string& key, const std::string& value) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return v;
}

}  // namespace

KernelSpec KernelConfig::make(double dynamic_range) const {
  switch (family) {
    case KernelFamily::gaussian:
      return KernelSpec::gaussian(h);
    case KernelFamily::histogram: {
      const double range = dynamic_range > 0.0 ? dynamic_range : 1.0;
      return KernelSpec::histogram(h, epsilon ? *epsilon : 1e-3 * range / h);
    }
    case KernelFamily::table:
      break;
  }
  throw ConfigError("kernel.family=table cannot be selected from a config file");
}

namespace {

// Returns false when key is not a solver key.
bool apply_solver_entry(SolverConfig& s, const std::string& key, const std::string& value) {
  if (key == "solver.lambda") {
    s.lambda = parse_real(key, value);
  } else if (key == "solver.tau0") {
    if (value == "auto") {
      s.tau0.reset();
    } else {
      s.tau0 = parse_real(key, value);
    }
  } else if (key == "solver.tau_max") {
    s.tau_max = parse_real(key, value);
  } else if (key == "solver.tau_policy") {
    if (value == "adaptive") {
      s.tau_policy = TauPolicy::adaptive;
    } else if (value == "fixed") {
      s.tau_policy = TauPolicy::fixed;
    } else {
      throw ConfigError("solver.tau_policy must be 'adaptive' or 'fixed'");
    }
  } else if (key == "solver.fp_tol") {
    s.fp_tol = parse_real(key, value);
  } else if (key == "solver.fp_max_iter") {
    s.fp_max_iter = static_cast<int>(parse_int(key, value));
  } else if (key == "solver.max_steps") {
    s.max_steps = static_cast<int>(parse_int(key, value));
  } else if (key == "solver.energy_tol") {
    s.energy_tol = parse_real(key, value);
  } else if (key == "solver.record_every") {
    s.record_every = static_cast<int>(parse_int(key, value));
  } else {
    return false;
  }
  return true;
}

}  // namespace

void apply_config_entry(Config& config, const std::string& key, const std::string& value) {
  PipelineParams& p = config.pipeline;
  if (apply_solver_entry(config.solver, key, value)) {
    apply_solver_entry(p.solver, key, value);
    return;
  }
  if (key == "kernel.family") {
    try {
      config.kernel.family = kernel_family_from_string(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "kernel.h") {
    config.kernel.h = parse_real(key, value);
  } else if (key == "kernel.epsilon") {
    config.kernel.epsilon = parse_real(key, value);
  } else if (key == "quantize.max_levels") {
    if (value == "none") {
      config.q.reset();
    } else {
      const long q = parse_int(key, value);
      if (q < 1) throw ConfigError("quantize.max_levels must be >= 1");
      config.q = static_cast<std::size_t>(q);
    }
  } else if (key == "pipeline.h_background") {
    p.h_background = parse_real(key, value);
  } else if (key == "pipeline.h_nucleus") {
    p.h_nucleus = parse_real(key, value);
  } else if (key == "pipeline.q") {
    const long q = parse_int(key, value);
    if (q < 1) throw ConfigError("pipeline.q must be >= 1");
    p.q = static_cast<std::size_t>(q);
  } else if (key == "pipeline.gap_tol") {
    p.gap_tol = parse_real(key, value);
  } else if (key == "pipeline.tau_max") {
    p.solver.tau_max = parse_real(key, value);
  } else if (key == "pipeline.min_cluster_fraction") {
    p.min_cluster_fraction = parse_real(key, value);
    if (!(p.min_cluster_fraction >= 0.0 && p.min_cluster_fraction < 1.0)) {
      throw ConfigError("pipeline.min_cluster_fraction must lie in [0, 1)");
    }
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

Config parse_config(const std::string& text) {
  Config config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  try {
    config.solver.validate();
    config.pipeline.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(config.kernel.h > 0.0)) throw ConfigError("kernel.h must be positive");
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config({std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

}  // namespace rnf
