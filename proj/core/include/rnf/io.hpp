#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "rnf/dynamics.hpp"
#include "rnf/grid.hpp"
#include "rnf/segmentation.hpp"

namespace rnf {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class PgmError : public IoError {
public:
  enum class Kind {
    open_failed,
    unsupported_magic,
    malformed_header,
    malformed_payload,
    truncated,
    write_failed,
  };

  PgmError(Kind kind, const std::string& what) : IoError(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

struct PgmImage {
  Grid pixels;
  int maxval = 255;
};

/// Reads P2 (ASCII) or P5 (binary, maxval <= 65535, big-endian when > 255).
PgmImage read_pgm(const std::filesystem::path& path);
PgmImage parse_pgm(const std::string& bytes);

/// Writes binary P5; samples are rounded and clamped to [0, maxval].
void write_pgm(const Grid& grid, const std::filesystem::path& path, int maxval = 255);
std::string encode_pgm(const Grid& grid, int maxval = 255);

/// Masks are P5 with maxval 255 and samples in {0, 255}.
void write_mask_pgm(const Mask& mask, const std::filesystem::path& path);
/// Any nonzero sample is inside the mask.
Mask read_mask_pgm(const std::filesystem::path& path);

enum class TrajectoryFormat { csv, json };

/// CSV columns: step,t,tau,inner_iters,energy,c_1..c_Q; JSON mirrors Trajectory.
/// Reals carry 17 significant digits.
std::string format_trajectory(const Trajectory& traj, TrajectoryFormat format);
void export_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                       TrajectoryFormat format);
Trajectory parse_trajectory_json(const std::string& text);

/// Formats a double with 17 significant digits.
std::string format_real(double x);

}  // namespace rnf
