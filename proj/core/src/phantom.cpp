#include "rnf/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rnf {

Phantom make_cell_phantom(const PhantomSpec& spec) {
  Phantom p;
  p.image = Grid(spec.width, spec.height);
  p.background = Mask(spec.width, spec.height);
  p.cytoplasm = Mask(spec.width, spec.height);
  p.nucleus = Mask(spec.width, spec.height);

  const double cx = 0.5 * static_cast<double>(spec.width);
  const double cy = 0.5 * static_cast<double>(spec.height);
  const double nx = cx + 0.3 * spec.cell_radius;
  const double ny = cy - 0.2 * spec.cell_radius;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);

  for (std::size_t y = 0; y < spec.height; ++y) {
    for (std::size_t x = 0; x < spec.width; ++x) {
      const double px = static_cast<double>(x) + 0.5;
      const double py = static_cast<double>(y) + 0.5;
      const bool in_cell = std::hypot(px - cx, py - cy) <= spec.cell_radius;
      const bool in_nucleus = std::hypot(px - nx, py - ny) <= spec.nucleus_radius;
      const std::size_t i = y * spec.width + x;
      double v = spec.background;
      if (in_nucleus) {
        v = spec.nucleus;
        p.nucleus.bits[i] = 1;
      } else if (in_cell) {
        v = spec.cell;
        p.cytoplasm.bits[i] = 1;
      } else {
        p.background.bits[i] = 1;
      }
      if (spec.noise_sigma > 0.0) v += noise(rng);
      p.image[i] = std::clamp(std::round(v), 0.0, 255.0);
    }
  }
  return p;
}

}  // namespace rnf
