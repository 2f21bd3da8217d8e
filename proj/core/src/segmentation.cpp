#include "rnf/segmentation.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace rnf {

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

namespace {

template <typename Op>
Mask combine(const Mask& a, const Mask& b, Op op) {
  if (!a.same_shape(b)) throw std::invalid_argument("mask shapes differ");
  Mask out(a.width, a.height);
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    out.bits[i] = static_cast<std::uint8_t>(op(a.bits[i] != 0, b.bits[i] != 0) ? 1 : 0);
  }
  return out;
}

}  // namespace

Mask mask_and(const Mask& a, const Mask& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}

Mask mask_or(const Mask& a, const Mask& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}

Mask mask_not(const Mask& a) {
  Mask out(a.width, a.height);
  for (std::size_t i = 0; i < a.bits.size(); ++i) out.bits[i] = a.bits[i] ? 0 : 1;
  return out;
}

std::vector<std::size_t> cluster_levels(std::span<const double> final_levels, double gap_tol) {
  for (std::size_t j = 1; j < final_levels.size(); ++j) {
    if (final_levels[j] > final_levels[j - 1]) {
      throw std::invalid_argument("cluster_levels: levels must be nonincreasing");
    }
  }
  std::vector<std::size_t> labels(final_levels.size(), 0);
  for (std::size_t j = 1; j < final_levels.size(); ++j) {
    const double gap = final_levels[j - 1] - final_levels[j];
    labels[j] = gap < gap_tol ? labels[j - 1] : labels[j - 1] + 1;
  }
  return labels;
}

std::vector<std::size_t> merge_small_clusters(std::span<const std::size_t> labels,
                                              std::span<const double> final_levels,
                                              std::span<const double> measures,
                                              double min_measure) {
  if (labels.size() != final_levels.size() || labels.size() != measures.size()) {
    throw std::invalid_argument("merge_small_clusters: size mismatch");
  }
  // Runs of consecutive levels, each [first, last] with its mass.
  struct Run {
    std::size_t first, last;
    double mass;
  };
  std::vector<Run> runs;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (j == 0 || labels[j] != labels[j - 1]) {
      if (j > 0 && labels[j] < labels[j - 1]) {
        throw std::invalid_argument("merge_small_clusters: labels must be nondecreasing");
      }
      runs.push_back({j, j, 0.0});
    }
    runs.back().last = j;
    runs.back().mass += measures[j];
  }
  while (runs.size() > 1) {
    std::size_t smallest = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
      if (runs[r].mass < runs[smallest].mass) smallest = r;
    }
    if (!(runs[smallest].mass < min_measure)) break;
    const double inf = std::numeric_limits<double>::infinity();
    const double up = smallest > 0
                          ? final_levels[runs[smallest - 1].last] - final_levels[runs[smallest].first]
                          : inf;
    const double down = smallest + 1 < runs.size()
                            ? final_levels[runs[smallest].last] - final_levels[runs[smallest + 1].first]
                            : inf;
    const std::size_t keep = up <= down ? smallest - 1 : smallest;
    runs[keep].last = runs[keep + 1].last;
    runs[keep].mass += runs[keep + 1].mass;
    runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(keep + 1));
  }
  std::vector<std::size_t> out(labels.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (std::size_t j = runs[r].first; j <= runs[r].last; ++j) out[j] = r;
  }
  return out;
}

Mask mask_from_cluster(const QuantizedImage& img, std::span<const std::size_t> labels,
                       std::size_t cluster_id) {
  if (labels.size() != img.level_count()) {
    throw std::invalid_argument("mask_from_cluster: one label per level required");
  }
  if (std::find(labels.begin(), labels.end(), cluster_id) == labels.end()) {
    throw std::invalid_argument("mask_from_cluster: unknown cluster id");
  }
  Mask m(img.width, img.height);
  for (std::size_t i = 0; i < img.level_index.size(); ++i) {
    m.bits[i] = labels[img.level_index[i]] == cluster_id ? 1 : 0;
  }
  return m;
}

DiceResult dice(const Mask& a, const Mask& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("dice: mask shapes differ");
  std::size_t na = 0;
  std::size_t nb = 0;
  std::size_t both = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool x = a.bits[i] != 0;
    const bool y = b.bits[i] != 0;
    na += x;
    nb += y;
    both += x && y;
  }
  if (na + nb == 0) return {1.0};
  return {2.0 * static_cast<double>(both) / static_cast<double>(na + nb)};
}

FilterRun filter_and_cluster(const Grid& image, double h, const PipelineParams& params) {
  if (!(params.min_cluster_fraction >= 0.0 && params.min_cluster_fraction < 1.0)) {
    throw std::invalid_argument("min_cluster_fraction must lie in [0, 1)");
  }
  FilterRun out;
  out.quantized = quantize(image, params.q);
  const RearrangedProfile profile = decreasing_rearrangement(out.quantized);
  out.trajectory = run(profile, params.solver, KernelSpec::gaussian(h));

  const auto& levels = out.quantized.levels;
  const double range = levels.front() - levels.back();
  const double gap_tol = params.gap_tol ? *params.gap_tol : 4.0 * range / static_cast<double>(params.q);
  out.labels = cluster_levels(out.trajectory.final_levels(), gap_tol);
  const std::vector<double> mu = profile.measures_real();
  const double total = static_cast<double>(profile.total_measure());
  out.labels = merge_small_clusters(out.labels, out.trajectory.final_levels(), mu,
                                    params.min_cluster_fraction * total);
  out.cluster_count = out.labels.back() + 1;
  return out;
}

SegmentationResult segment_pipeline(const Grid& image, const PipelineParams& params) {
  SegmentationResult res;
  res.background_run = filter_and_cluster(image, params.h_background, params);
  res.nucleus_run = filter_and_cluster(image, params.h_nucleus, params);
  if (res.background_run.cluster_count < 2 || res.nucleus_run.cluster_count < 2) {
    throw SegmentationError("no separable regions");
  }
  res.background = mask_from_cluster(res.background_run.quantized, res.background_run.labels, 0);
  res.nucleus = mask_from_cluster(res.nucleus_run.quantized, res.nucleus_run.labels,
                                  res.nucleus_run.cluster_count - 1);
  res.cytoplasm = mask_and(mask_not(res.background), mask_not(res.nucleus));
  return res;
}

}  // namespace rnf
