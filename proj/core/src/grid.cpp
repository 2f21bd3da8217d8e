#include "rnf/grid.hpp"

#include <stdexcept>
#include <utility>

namespace rnf {

Grid::Grid(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(width * height, fill) {}

Grid::Grid(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != width_ * height_) {
    throw std::invalid_argument("Grid: value count does not match width*height");
  }
}

Grid grid_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t w = rows.front().size();
  std::vector<double> values;
  values.reserve(w * rows.size());
  for (const auto& row : rows) {
    if (row.size() != w) throw std::invalid_argument("grid_from_rows: ragged rows");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Grid(w, rows.size(), std::move(values));
}

}  // namespace rnf
