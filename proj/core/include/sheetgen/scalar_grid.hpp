#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "sheetgen/geometry_io.hpp"
#include "sheetgen/vec3.hpp"

namespace sheetgen {

/// Regular vertex grid of scalar samples. Values are stored in lexicographic
/// order with x varying fastest: index = i + nx * (j + ny * k).
class ScalarGrid {
public:
  ScalarGrid() = default;
  ScalarGrid(Dims3 dims, Vec3 origin, Vec3 spacing);
  ScalarGrid(Dims3 dims, Vec3 origin, Vec3 spacing, std::vector<double> values);

  /// Corner-inclusive grid spanning `box` (spacing = extent / (dim - 1)).
  static ScalarGrid spanning(const Aabb& box, Dims3 dims);

  [[nodiscard]] const Dims3& dims() const noexcept { return dims_; }
  [[nodiscard]] const Vec3& origin() const noexcept { return origin_; }
  [[nodiscard]] const Vec3& spacing() const noexcept { return spacing_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] Aabb box() const noexcept;

  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + dims_[0] * (j + dims_[1] * k);
  }
  [[nodiscard]] Vec3 position(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return {origin_.x + static_cast<double>(i) * spacing_.x,
            origin_.y + static_cast<double>(j) * spacing_.y,
            origin_.z + static_cast<double>(k) * spacing_.z};
  }
  [[nodiscard]] Vec3 position(std::size_t flat) const noexcept;
  [[nodiscard]] double axis_coordinate(std::size_t axis, std::size_t i) const noexcept {
    return origin_[axis] + static_cast<double>(i) * spacing_[axis];
  }

  [[nodiscard]] double at(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return values_[index(i, j, k)];
  }
  double& at(std::size_t i, std::size_t j, std::size_t k) noexcept { return values_[index(i, j, k)]; }

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }

private:
  Dims3 dims_{0, 0, 0};
  Vec3 origin_;
  Vec3 spacing_;
  std::vector<double> values_;
};

/// Binary layout: 3 x u64 dims, 3 x f64 origin, 3 x f64 spacing, then the
/// f64 values in lexicographic order. Native little-endian.
void write_grid(const std::filesystem::path& path, const ScalarGrid& grid);
ScalarGrid read_grid(const std::filesystem::path& path);

/// JSON mirror for debugging. Values are only emitted when requested.
void write_grid_json(const std::filesystem::path& path, const ScalarGrid& grid, bool include_values);

}  // namespace sheetgen
