#include "rnf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rnf/asymptotics.hpp"
#include "rnf/config.hpp"
#include "rnf/direct_oracle.hpp"
#include "rnf/io.hpp"
#include "rnf/phantom.hpp"
#include "rnf/rearrange.hpp"
#include "rnf/segmentation.hpp"

namespace rnf::cli {

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Flags shared by the solver-driven commands.
struct Common {
  std::string config_path;
  std::optional<double> h;
  std::optional<double> lambda;
  std::optional<std::size_t> q;
  std::optional<int> max_steps;
  std::optional<double> tol;
};

void add_common(CLI::App* sub, Common& c, bool with_h = true) {
  sub->add_option("--config", c.config_path, "key=value configuration file");
  if (with_h) sub->add_option("--h", c.h, "kernel window");
  sub->add_option("--lambda", c.lambda, "fidelity weight");
  sub->add_option("--q", c.q, "number of quantization levels");
  sub->add_option("--max-steps", c.max_steps, "step cap");
  sub->add_option("--tol", c.tol, "fixed-point tolerance");
}

Config load(const Common& c) {
  Config cfg = c.config_path.empty() ? Config{} : load_config(c.config_path);
  for (SolverConfig* s : {&cfg.solver, &cfg.pipeline.solver}) {
    if (c.lambda) s->lambda = *c.lambda;
    if (c.max_steps) s->max_steps = *c.max_steps;
    if (c.tol) s->fp_tol = *c.tol;
  }
  if (c.h) cfg.kernel.h = *c.h;
  if (c.q) {
    if (*c.q < 1) throw UsageError("--q must be >= 1");
    cfg.q = *c.q;
    cfg.pipeline.q = *c.q;
  }
  if (!(cfg.kernel.h > 0.0)) throw UsageError("--h must be positive");
  try {
    cfg.solver.validate();
    cfg.pipeline.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

double dynamic_range(const Grid& g) {
  const auto v = g.values();
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

TrajectoryFormat format_for(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".json") return TrajectoryFormat::json;
  if (ext == ".csv" || ext.empty()) return TrajectoryFormat::csv;
  throw UsageError("trajectory file must end in .csv or .json");
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + " list is empty");
  return out;
}

int cmd_filter(const Common& common, const std::string& input, const std::string& output,
               const std::string& trajectory_path, std::ostream& out) {
  const Config cfg = load(common);
  const PgmImage img = read_pgm(input);
  const QuantizedImage quantized = quantize(img.pixels, cfg.q);
  const RearrangedProfile profile = decreasing_rearrangement(quantized);
  const KernelSpec spec = cfg.kernel.make(dynamic_range(img.pixels));
  const Trajectory traj = run(profile, cfg.solver, spec);
  write_pgm(reconstruct(quantized, traj.final_levels()), output, img.maxval);
  if (!trajectory_path.empty()) {
    export_trajectory(traj, trajectory_path, format_for(trajectory_path));
  }
  out << "levels=" << profile.size() << " steps=" << traj.total_steps
      << " t=" << format_real(traj.times.back()) << " termination=" << to_string(traj.termination)
      << "\n";
  return kOk;
}

int cmd_verify(const Common& common, const std::string& input, double tau, int steps,
               std::ostream& out) {
  const Config cfg = load(common);
  const PgmImage img = read_pgm(input);
  if (img.pixels.width() > kDirectOracleMaxSide || img.pixels.height() > kDirectOracleMaxSide) {
    throw UsageError("verify-equivalence accepts images up to " +
                     std::to_string(kDirectOracleMaxSide) + "x" +
                     std::to_string(kDirectOracleMaxSide));
  }
  if (!(tau > 0.0) || steps < 1) throw UsageError("--tau must be positive and --steps >= 1");
  const KernelSpec spec = cfg.kernel.make(dynamic_range(img.pixels));
  const EquivalenceReport r = compare_equivalence(img.pixels, cfg.solver.lambda, spec, tau, steps);
  const bool pass = r.max_abs_gap <= 1e-10 && r.level_set_violations == 0;
  out << "max_abs_gap=" << format_real(r.max_abs_gap)
      << " level_set_violations=" << r.level_set_violations << " levels=" << r.level_count
      << " steps=" << r.steps << " " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kOk : kNumericalFailure;
}

struct ShockArgs {
  std::string profile = "cubic";
  std::string poly;
  double measure = 1.0;
  std::string hs = "0.2,0.1,0.05,0.025";
  std::string ss = "0.5";
  std::string constants = "nominal";
  std::string out_path;
};

int cmd_shock(const ShockArgs& a, std::ostream& out) {
  std::vector<double> coeffs;
  if (!a.poly.empty()) {
    coeffs = parse_list(a.poly, "--poly");
  } else if (a.profile == "linear") {
    coeffs = {1.0, -1.0};
  } else if (a.profile == "cubic") {
    coeffs = {1.0, -1.0, 0.0, -0.3};
  } else {
    throw UsageError("--profile must be linear or cubic (or give --poly)");
  }
  ExpansionConstants constants = ExpansionConstants::nominal;
  if (a.constants == "kappa") {
    constants = ExpansionConstants::kappa;
  } else if (a.constants != "nominal") {
    throw UsageError("--constants must be nominal or kappa");
  }
  const std::vector<double> hs = parse_list(a.hs, "--h");
  const std::vector<double> ss = parse_list(a.ss, "--s");
  SmoothProfile profile = [&] {
    try {
      return SmoothProfile::polynomial(a.measure, coeffs);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();

  std::ostringstream csv;
  csv << "s,h,I,ktilde_term,antidiffusion_term,residual,observed_order\n";
  for (double s : ss) {
    OrderStudy study;
    try {
      study = residual_order_study(profile, s, KernelSpec::gaussian(1.0), hs, constants);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    for (const auto& row : study.rows) {
      csv << format_real(s) << ',' << format_real(row.h) << ',' << format_real(row.integral) << ','
          << format_real(row.ktilde_term) << ',' << format_real(row.antidiffusion_term) << ','
          << format_real(row.residual) << ','
          << (std::isnan(row.observed_order) ? std::string() : format_real(row.observed_order))
          << '\n';
    }
  }
  if (a.out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(a.out_path, std::ios::binary);
    if (!(f << csv.str())) throw IoError("cannot write '" + a.out_path + "'");
  }
  return kOk;
}

struct SegmentArgs {
  std::string input;
  std::string prefix;
  std::optional<double> h_background;
  std::optional<double> h_nucleus;
};

int cmd_segment(const Common& common, const SegmentArgs& a, std::ostream& out) {
  Config cfg = load(common);
  if (a.h_background) cfg.pipeline.h_background = *a.h_background;
  if (a.h_nucleus) cfg.pipeline.h_nucleus = *a.h_nucleus;
  if (!(cfg.pipeline.h_background > 0.0) || !(cfg.pipeline.h_nucleus > 0.0)) {
    throw UsageError("window sizes must be positive");
  }
  const PgmImage img = read_pgm(a.input);
  const SegmentationResult r = segment_pipeline(img.pixels, cfg.pipeline);
  write_mask_pgm(r.background, a.prefix + "_background.pgm");
  write_mask_pgm(r.nucleus, a.prefix + "_nucleus.pgm");
  write_mask_pgm(r.cytoplasm, a.prefix + "_cytoplasm.pgm");
  out << "background_clusters=" << r.background_run.cluster_count
      << " nucleus_clusters=" << r.nucleus_run.cluster_count
      << " background=" << r.background.count() << " nucleus=" << r.nucleus.count()
      << " cytoplasm=" << r.cytoplasm.count() << "\n";
  return kOk;
}

int cmd_dice(const std::string& a, const std::string& b, std::ostream& out) {
  const Mask ma = read_mask_pgm(a);
  const Mask mb = read_mask_pgm(b);
  if (!ma.same_shape(mb)) throw UsageError("mask shapes differ");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", dice(ma, mb).value);
  out << buf << "\n";
  return kOk;
}

struct PhantomArgs {
  std::string prefix;
  std::size_t size = 64;
  double noise = 0.0;
  std::uint64_t seed = 1;
};

int cmd_phantom(const PhantomArgs& a, std::ostream& out) {
  if (a.size < 8) throw UsageError("--size must be >= 8");
  PhantomSpec spec;
  spec.width = spec.height = a.size;
  spec.cell_radius = 22.0 * static_cast<double>(a.size) / 64.0;
  spec.nucleus_radius = 9.0 * static_cast<double>(a.size) / 64.0;
  spec.noise_sigma = a.noise;
  spec.seed = a.seed;
  const Phantom p = make_cell_phantom(spec);
  write_pgm(p.image, a.prefix + ".pgm");
  write_mask_pgm(p.background, a.prefix + "_background_truth.pgm");
  write_mask_pgm(p.nucleus, a.prefix + "_nucleus_truth.pgm");
  write_mask_pgm(p.cytoplasm, a.prefix + "_cytoplasm_truth.pgm");
  out << "wrote " << a.prefix << ".pgm and ground-truth masks\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rearranged nonlocal filtering of grayscale images", "rnf"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  Common filter_common;
  std::string filter_in, filter_out, filter_traj;
  auto* filter = app.add_subcommand("filter", "evolve an image's level values and write the result");
  filter->add_option("input", filter_in, "input PGM")->required();
  filter->add_option("--out,-o", filter_out, "output PGM")->required();
  filter->add_option("--trajectory", filter_traj, "write the trajectory (.csv or .json)");
  add_common(filter, filter_common);

  Common verify_common;
  std::string verify_in;
  double verify_tau = 1e-3;
  int verify_steps = 100;
  auto* verify = app.add_subcommand(
      "verify-equivalence", "compare per-pixel and rearranged explicit Euler trajectories");
  verify->add_option("input", verify_in, "input PGM, at most 64x64")->required();
  verify->add_option("--tau", verify_tau, "Euler step")->capture_default_str();
  verify->add_option("--steps", verify_steps, "number of steps")->capture_default_str();
  add_common(verify, verify_common);

  ShockArgs shock_args;
  auto* shock = app.add_subcommand("shock-study", "residual order study of the small-h expansion");
  shock->add_option("--profile", shock_args.profile, "linear or cubic")->capture_default_str();
  shock->add_option("--poly", shock_args.poly, "polynomial coefficients c0,c1,...");
  shock->add_option("--measure", shock_args.measure, "domain measure")->capture_default_str();
  shock->add_option("--h", shock_args.hs, "geometric list of windows")->capture_default_str();
  shock->add_option("--s", shock_args.ss, "evaluation points")->capture_default_str();
  shock->add_option("--constants", shock_args.constants, "nominal or kappa")->capture_default_str();
  shock->add_option("--out,-o", shock_args.out_path, "CSV path (default stdout)");

  Common segment_common;
  SegmentArgs segment_args;
  auto* segment = app.add_subcommand("segment", "background / nucleus / cytoplasm masks");
  segment->add_option("input", segment_args.input, "input PGM")->required();
  segment->add_option("--out,-o", segment_args.prefix, "output prefix for the three masks")
      ->required();
  segment->add_option("--h-background", segment_args.h_background, "window of the background run");
  segment->add_option("--h-nucleus", segment_args.h_nucleus, "window of the nucleus run");
  add_common(segment, segment_common, false);

  std::string dice_a, dice_b;
  auto* dice_cmd = app.add_subcommand("dice", "Dice coefficient of two mask PGMs");
  dice_cmd->add_option("a", dice_a, "first mask")->required();
  dice_cmd->add_option("b", dice_b, "second mask")->required();

  PhantomArgs phantom_args;
  auto* phantom = app.add_subcommand("phantom", "write a synthetic cell image with true masks");
  phantom->add_option("--out,-o", phantom_args.prefix, "output prefix")->required();
  phantom->add_option("--size", phantom_args.size, "side length")->capture_default_str();
  phantom->add_option("--noise", phantom_args.noise, "Gaussian noise sigma")->capture_default_str();
  phantom->add_option("--seed", phantom_args.seed, "noise seed")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (filter->parsed()) return cmd_filter(filter_common, filter_in, filter_out, filter_traj, out);
    if (verify->parsed()) return cmd_verify(verify_common, verify_in, verify_tau, verify_steps, out);
    if (shock->parsed()) return cmd_shock(shock_args, out);
    if (segment->parsed()) return cmd_segment(segment_common, segment_args, out);
    if (dice_cmd->parsed()) return cmd_dice(dice_a, dice_b, out);
    if (phantom->parsed()) return cmd_phantom(phantom_args, out);
  } catch (const UsageError& e) {
    err << "rnf: " << e.what() << "\n";
    return kUsageError;
  } catch (const IoError& e) {
    err << "rnf: " << e.what() << "\n";
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "rnf: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "rnf: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "rnf: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kUsageError;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace rnf::cli
