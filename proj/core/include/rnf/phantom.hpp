#pragma once

#include <cstddef>
#include <cstdint>

#include "rnf/grid.hpp"
#include "rnf/segmentation.hpp"

namespace rnf {

struct PhantomSpec {
  std::size_t width = 64;
  std::size_t height = 64;
  double background = 220.0;
  double cell = 120.0;
  double nucleus = 40.0;
  double cell_radius = 22.0;
  double nucleus_radius = 9.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
};

struct Phantom {
  Grid image;  ///< rounded to integers and clamped to [0, 255]
  Mask background;
  Mask cytoplasm;
  Mask nucleus;
};

/// Centered cell disk with an off-center nucleus disk on a uniform background.
Phantom make_cell_phantom(const PhantomSpec& spec);

}  // namespace rnf
