#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rnf/dynamics.hpp"
#include "rnf/grid.hpp"
#include "rnf/kernels.hpp"
#include "rnf/rearrange.hpp"

namespace rnf {

struct Mask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> bits;  ///< 0 or 1 per pixel, row-major

  Mask() = default;
  Mask(std::size_t w, std::size_t h) : width(w), height(h), bits(w * h, 0) {}

  bool operator[](std::size_t i) const { return bits[i] != 0; }
  std::size_t count() const;
  bool same_shape(const Mask& o) const noexcept { return width == o.width && height == o.height; }

  friend bool operator==(const Mask&, const Mask&) = default;
};

Mask mask_and(const Mask& a, const Mask& b);
Mask mask_or(const Mask& a, const Mask& b);
Mask mask_not(const Mask& a);

struct DiceResult {
  double value = 0.0;
};

class SegmentationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Groups consecutive levels whose gap is below gap_tol. Labels are 0-based
/// and ordered from the brightest cluster.
std::vector<std::size_t> cluster_levels(std::span<const double> final_levels, double gap_tol);

/// Folds every cluster whose total measure is below min_measure into the
/// neighbouring cluster across the smaller level gap, smallest first, then
/// renumbers. A single remaining cluster is left alone.
std::vector<std::size_t> merge_small_clusters(std::span<const std::size_t> labels,
                                              std::span<const double> final_levels,
                                              std::span<const double> measures,
                                              double min_measure);

Mask mask_from_cluster(const QuantizedImage& img, std::span<const std::size_t> labels,
                       std::size_t cluster_id);

/// 2|A n B| / (|A| + |B|); two empty masks score 1.
DiceResult dice(const Mask& a, const Mask& b);

struct PipelineParams {
  double h_background = 5.0;
  double h_nucleus = 25.0;
  std::size_t q = 256;
  /// Cluster gap; nullopt selects 4 * (dynamic range) / Q.
  std::optional<double> gap_tol;
  /// Clusters holding less than this fraction of the pixels are merged away.
  double min_cluster_fraction = 0.01;
  SolverConfig solver = default_solver();  ///< shared by both runs; lambda comes from here

  static SolverConfig default_solver() {
    SolverConfig c;
    c.tau_max = 1e-3;
    return c;
  }
};

struct FilterRun {
  QuantizedImage quantized;
  Trajectory trajectory;
  std::vector<std::size_t> labels;
  std::size_t cluster_count = 0;
};

struct SegmentationResult {
  Mask background;
  Mask nucleus;
  Mask cytoplasm;
  FilterRun background_run;
  FilterRun nucleus_run;
};

/// Quantize, rearrange, evolve and cluster at window h.
FilterRun filter_and_cluster(const Grid& image, double h, const PipelineParams& params);

/// Background is the brightest cluster of the h_background run, nucleus the
/// darkest cluster of the h_nucleus run, cytoplasm what remains.
SegmentationResult segment_pipeline(const Grid& image, const PipelineParams& params);

}  // namespace rnf
