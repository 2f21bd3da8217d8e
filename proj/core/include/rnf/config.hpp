#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "rnf/dynamics.hpp"
#include "rnf/kernels.hpp"
#include "rnf/segmentation.hpp"

namespace rnf {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct KernelConfig {
  KernelFamily family = KernelFamily::gaussian;
  double h = 25.0;
  /// nullopt: 1e-3 of the data's dynamic range, expressed in units of xi/h.
  std::optional<double> epsilon;

  /// Materializes the kernel; dynamic_range resolves the default epsilon.
  KernelSpec make(double dynamic_range) const;
};

struct Config {
  KernelConfig kernel;
  SolverConfig solver;
  PipelineParams pipeline;
  std::optional<std::size_t> q = 256;  ///< quantization cap for `filter`
};

/// Flat `section.key=value` text; `#` starts a comment; blank lines ignored.
/// solver.* keys set both the filter solver and the pipeline solver;
/// pipeline.tau_max only touches the latter.
/// Unknown keys and unparsable values raise ConfigError.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Applies one key=value pair on top of an existing configuration.
void apply_config_entry(Config& config, const std::string& key, const std::string& value);

}  // namespace rnf
