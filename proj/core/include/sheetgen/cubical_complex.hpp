#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sheetgen/scalar_grid.hpp"

namespace sheetgen {

/// All elementary cubes of a vertex grid, addressed by doubled ("Khalimsky")
/// coordinates: a cell with coordinates (a,b,c) in [0, 2n-1) spans vertices
/// floor(a/2)..ceil(a/2) along x, and so on. Its dimension is the number of
/// odd coordinates. Each cell carries the maximum of its vertex values.
class CubicalComplex {
public:
  [[nodiscard]] const Dims3& vertex_dims() const noexcept { return vertex_dims_; }
  [[nodiscard]] const Dims3& cell_dims() const noexcept { return cell_dims_; }
  [[nodiscard]] std::size_t cell_count() const noexcept { return values_.size(); }
  /// Number of axes with more than one vertex.
  [[nodiscard]] int top_dimension() const noexcept { return top_dim_; }

  [[nodiscard]] std::size_t cell_index(std::size_t a, std::size_t b, std::size_t c) const noexcept {
    return a + cell_dims_[0] * (b + cell_dims_[1] * c);
  }
  [[nodiscard]] std::array<std::size_t, 3> coordinates(std::size_t cell) const noexcept {
    const std::size_t a = cell % cell_dims_[0];
    const std::size_t rest = cell / cell_dims_[0];
    return {a, rest % cell_dims_[1], rest / cell_dims_[1]};
  }
  [[nodiscard]] int dimension(std::size_t cell) const noexcept {
    const auto co = coordinates(cell);
    return static_cast<int>((co[0] & 1U) + (co[1] & 1U) + (co[2] & 1U));
  }
  [[nodiscard]] double value(std::size_t cell) const noexcept { return values_[cell]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Codimension-1 faces (boundary over Z/2).
  void faces(std::size_t cell, std::vector<std::size_t>& out) const;
  /// Dimension-plus-one cofaces.
  void cofaces(std::size_t cell, std::vector<std::size_t>& out) const;

  friend CubicalComplex build_complex(const ScalarGrid& grid);

private:
  Dims3 vertex_dims_{0, 0, 0};
  Dims3 cell_dims_{0, 0, 0};
  int top_dim_ = 0;
  std::vector<double> values_;
};

/// Lower-star (vertex-valued) cubical complex of the grid.
CubicalComplex build_complex(const ScalarGrid& grid);

}  // namespace sheetgen
