#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rnf/grid.hpp"

namespace rnf {

/// Field stored as per-pixel indices into a strictly decreasing level list.
///
/// Index j (0-based) refers to levels[j]; levels[0] is the brightest value.
/// Every level is used by at least one pixel.
struct QuantizedImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::size_t> level_index;
  std::vector<double> levels;

  std::size_t level_count() const noexcept { return levels.size(); }
  std::size_t pixel_count() const noexcept { return level_index.size(); }

  /// Throws std::invalid_argument when an invariant does not hold.
  void validate() const;
};

/// Piecewise-constant decreasing rearrangement on (0, |Omega|).
///
/// Level j occupies I_j = [breakpoints[j], breakpoints[j+1]) with integer
/// pixel measure measures[j].
struct RearrangedProfile {
  std::vector<double> levels;
  std::vector<std::int64_t> measures;
  std::vector<std::int64_t> breakpoints;

  std::size_t size() const noexcept { return levels.size(); }
  std::int64_t total_measure() const noexcept {
    return breakpoints.empty() ? 0 : breakpoints.back();
  }
  std::vector<double> measures_real() const;

  /// Value u*(s) with the [a_{j-1}, a_j) convention; s = |Omega| maps to the last level.
  double value_at(double s) const;

  void validate() const;
};

/// Quantizes a field. Distinct values become levels unless max_levels caps
/// them, in which case values are binned into max_levels uniform-width bins
/// over [min, max] and each non-empty bin is represented by its member mean.
QuantizedImage quantize(std::span<const double> field, std::size_t width, std::size_t height,
                        std::optional<std::size_t> max_levels = std::nullopt);
QuantizedImage quantize(const Grid& field, std::optional<std::size_t> max_levels = std::nullopt);

RearrangedProfile decreasing_rearrangement(const QuantizedImage& img);

/// m(q) = |{x : u(x) > q}|.
std::int64_t distribution_function(const RearrangedProfile& profile, double q);

/// Pixel x receives evolved_levels[level_index(x)].
Grid reconstruct(const QuantizedImage& img, std::span<const double> evolved_levels);

/// Sum_j f(c_j) mu_j, the rearranged side of the equi-measurability identity.
double integrate_levels(const RearrangedProfile& profile, const std::function<double(double)>& f);

/// L^p distance between two piecewise-constant profiles of equal total
/// measure; p = infinity is the sup norm.
double profile_distance(const RearrangedProfile& a, const RearrangedProfile& b, double p);

/// L^p distance between two fields on the same pixel set (unit pixel area).
double field_distance(std::span<const double> a, std::span<const double> b, double p);

}  // namespace rnf
