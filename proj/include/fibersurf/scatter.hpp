#pragma once

#include <cstdint>
#include <vector>

#include "fibersurf/mesh.hpp"

namespace fibersurf {

struct RangeRect {
  double a_min = 0, b_min = 0, a_max = 0, b_max = 0;

  double width() const { return a_max - a_min; }
  double height() const { return b_max - b_min; }
  double diameter() const;
};

/// Component-wise min / max of the field. Throws on an empty field.
RangeRect range_rect(const BivariateField& field);

/// Linear density over the range rectangle; row 0 is at b_min.
struct DensityRaster {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  RangeRect rect;
  std::vector<double> cells;  // row-major

  /// Range-space area of one pixel. A zero-extent axis counts as extent 1.
  double cell_area() const;
  double total_mass() const;
  double max_density() const;
  double at(std::uint32_t x, std::uint32_t y) const { return cells[std::size_t{y} * width + x]; }
};

/// Monte-Carlo pushforward of tet volume: each tet drops `samples_per_tet`
/// uniformly distributed points carrying volume / samples_per_tet each.
/// The result depends only on `seed`, never on the thread count.
DensityRaster density_raster(const TetMesh& mesh, const BivariateField& field, std::uint32_t width,
                             std::uint32_t height, std::uint32_t samples_per_tet, std::uint64_t seed = 0);

}  // namespace fibersurf
