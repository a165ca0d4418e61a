#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geosim/grid.hpp"

namespace geosim {

/// Real-valued samples on a grid, one value per point in row-major order.
struct Field {
  std::vector<double> values;
  Grid2D grid;

  Field(std::vector<double> values_, const Grid2D& grid_)
      : values(std::move(values_)), grid(grid_) {
    if (values.size() != static_cast<std::size_t>(grid.size()))
      throw std::invalid_argument("Field: value count must match grid point count");
    for (double v : values)
      if (!std::isfinite(v)) throw std::invalid_argument("Field: values must be finite");
  }

  [[nodiscard]] int size() const { return grid.size(); }
};

} // namespace geosim
