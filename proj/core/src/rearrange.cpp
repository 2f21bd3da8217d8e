#include "rnf/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "rnf/numeric.hpp"

namespace rnf {

void QuantizedImage::validate() const {
  if (levels.empty()) throw std::invalid_argument("QuantizedImage: no levels");
  if (level_index.size() != width * height) {
    throw std::invalid_argument("QuantizedImage: index map does not match width*height");
  }
  for (std::size_t j = 1; j < levels.size(); ++j) {
    if (!(levels[j] < levels[j - 1])) {
      throw std::invalid_argument("QuantizedImage: levels must be strictly decreasing");
    }
  }
  std::vector<bool> used(levels.size(), false);
  for (std::size_t idx : level_index) {
    if (idx >= levels.size()) throw std::invalid_argument("QuantizedImage: index out of range");
    used[idx] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw std::invalid_argument("QuantizedImage: a level has no pixels");
  }
}

std::vector<double> RearrangedProfile::measures_real() const {
  return {measures.begin(), measures.end()};
}

double RearrangedProfile::value_at(double s) const {
  const auto total = static_cast<double>(total_measure());
  if (!(s >= 0.0 && s <= total)) throw std::out_of_range("RearrangedProfile: s outside [0, |Omega|]");
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (s < static_cast<double>(breakpoints[j + 1])) return levels[j];
  }
  return levels.back();
}

void RearrangedProfile::validate() const {
  if (levels.empty()) throw std::invalid_argument("RearrangedProfile: no levels");
  if (measures.size() != levels.size() || breakpoints.size() != levels.size() + 1) {
    throw std::invalid_argument("RearrangedProfile: inconsistent sizes");
  }
  if (breakpoints.front() != 0) throw std::invalid_argument("RearrangedProfile: a_0 must be 0");
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (measures[j] <= 0) throw std::invalid_argument("RearrangedProfile: measures must be positive");
    if (breakpoints[j + 1] - breakpoints[j] != measures[j]) {
      throw std::invalid_argument("RearrangedProfile: breakpoints disagree with measures");
    }
    if (j > 0 && levels[j] > levels[j - 1]) {
      throw std::invalid_argument("RearrangedProfile: levels must be nonincreasing");
    }
  }
}

QuantizedImage quantize(std::span<const double> field, std::size_t width, std::size_t height,
                        std::optional<std::size_t> max_levels) {
  if (field.empty()) throw std::invalid_argument("quantize: empty field");
  if (field.size() != width * height) {
    throw std::invalid_argument("quantize: field size does not match width*height");
  }
  if (max_levels && *max_levels < 1) throw std::invalid_argument("quantize: max_levels must be >= 1");
  for (double v : field) {
    if (!std::isfinite(v)) throw std::invalid_argument("quantize: non-finite intensity");
  }

  std::vector<double> distinct(field.begin(), field.end());
  std::sort(distinct.begin(), distinct.end(), std::greater<>());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  QuantizedImage img;
  img.width = width;
  img.height = height;
  img.level_index.resize(field.size());

  if (!max_levels || distinct.size() <= *max_levels) {
    img.levels = distinct;
    for (std::size_t i = 0; i < field.size(); ++i) {
      const auto it = std::lower_bound(distinct.begin(), distinct.end(), field[i], std::greater<>());
      img.level_index[i] = static_cast<std::size_t>(it - distinct.begin());
    }
    return img;
  }

  const std::size_t bins = *max_levels;
  const double lo = distinct.back();
  const double hi = distinct.front();
  const double width_bin = (hi - lo) / static_cast<double>(bins);
  auto bin_of = [&](double v) {
    const auto b = static_cast<std::size_t>(std::floor((v - lo) / width_bin));
    return std::min(b, bins - 1);
  };

  std::vector<CompensatedSum> sums(bins);
  std::vector<std::size_t> counts(bins, 0);
  std::vector<std::size_t> pixel_bin(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    pixel_bin[i] = bin_of(field[i]);
    sums[pixel_bin[i]].add(field[i]);
    ++counts[pixel_bin[i]];
  }

  // Brightest bin first.
  std::vector<std::size_t> bin_to_level(bins, 0);
  for (std::size_t b = bins; b-- > 0;) {
    if (counts[b] == 0) continue;
    bin_to_level[b] = img.levels.size();
    img.levels.push_back(sums[b].value() / static_cast<double>(counts[b]));
  }
  for (std::size_t i = 0; i < field.size(); ++i) img.level_index[i] = bin_to_level[pixel_bin[i]];
  return img;
}

QuantizedImage quantize(const Grid& field, std::optional<std::size_t> max_levels) {
  return quantize(field.values(), field.width(), field.height(), max_levels);
}

RearrangedProfile decreasing_rearrangement(const QuantizedImage& img) {
  img.validate();
  RearrangedProfile p;
  p.levels = img.levels;
  p.measures.assign(img.levels.size(), 0);
  for (std::size_t idx : img.level_index) ++p.measures[idx];
  p.breakpoints.resize(img.levels.size() + 1);
  p.breakpoints[0] = 0;
  for (std::size_t j = 0; j < p.measures.size(); ++j) {
    p.breakpoints[j + 1] = p.breakpoints[j] + p.measures[j];
  }
  return p;
}

std::int64_t distribution_function(const RearrangedProfile& profile, double q) {
  std::int64_t m = 0;
  for (std::size_t j = 0; j < profile.levels.size(); ++j) {
    if (profile.levels[j] > q) m += profile.measures[j];
  }
  return m;
}

Grid reconstruct(const QuantizedImage& img, std::span<const double> evolved_levels) {
  if (evolved_levels.size() != img.levels.size()) {
    throw std::invalid_argument("reconstruct: expected one evolved value per level");
  }
  Grid out(img.width, img.height);
  for (std::size_t i = 0; i < img.level_index.size(); ++i) {
    out[i] = evolved_levels[img.level_index[i]];
  }
  return out;
}

double integrate_levels(const RearrangedProfile& profile, const std::function<double(double)>& f) {
  CompensatedSum acc;
  for (std::size_t j = 0; j < profile.levels.size(); ++j) {
    acc.add(f(profile.levels[j]) * static_cast<double>(profile.measures[j]));
  }
  return acc.value();
}

double profile_distance(const RearrangedProfile& a, const RearrangedProfile& b, double p) {
  if (a.total_measure() != b.total_measure()) {
    throw std::invalid_argument("profile_distance: profiles live on different domains");
  }
  if (!(p >= 1.0)) throw std::invalid_argument("profile_distance: p must be >= 1");
  const bool sup = std::isinf(p);
  double acc = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t pos = 0;
  while (i < a.size() && j < b.size()) {
    const std::int64_t end = std::min(a.breakpoints[i + 1], b.breakpoints[j + 1]);
    const double len = static_cast<double>(end - pos);
    const double d = std::abs(a.levels[i] - b.levels[j]);
    if (len > 0.0) acc = sup ? std::max(acc, d) : acc + std::pow(d, p) * len;
    pos = end;
    if (a.breakpoints[i + 1] == end) ++i;
    if (b.breakpoints[j + 1] == end) ++j;
  }
  return sup ? acc : std::pow(acc, 1.0 / p);
}

double field_distance(std::span<const double> a, std::span<const double> b, double p) {
  if (a.size() != b.size()) throw std::invalid_argument("field_distance: size mismatch");
  if (!(p >= 1.0)) throw std::invalid_argument("field_distance: p must be >= 1");
  const bool sup = std::isinf(p);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    acc = sup ? std::max(acc, d) : acc + std::pow(d, p);
  }
  return sup ? acc : std::pow(acc, 1.0 / p);
}

}  // namespace rnf
