#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sheetgen/vec3.hpp"

namespace sheetgen {

/// Input samples of a porous surface. Never empty; every coordinate finite.
class PointCloud {
public:
  explicit PointCloud(std::vector<Vec3> points);

  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] std::span<const Vec3> points() const noexcept { return points_; }
  [[nodiscard]] const Vec3& operator[](std::size_t i) const noexcept { return points_[i]; }

private:
  std::vector<Vec3> points_;
};

/// Axis-aligned box with `min < max` on every axis.
struct Aabb {
  Vec3 min;
  Vec3 max;

  [[nodiscard]] Vec3 extent() const noexcept { return max - min; }
  [[nodiscard]] double diagonal() const noexcept { return norm(extent()); }
  [[nodiscard]] bool contains(const Vec3& p) const noexcept {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
           p.z <= max.z;
  }
  friend bool operator==(const Aabb&, const Aabb&) = default;
};

/// Uniform scale plus translation: normalized = (p - origin) * scale.
struct NormalizationTransform {
  double scale = 1.0;
  Vec3 origin;

  [[nodiscard]] Vec3 apply(const Vec3& p) const noexcept { return (p - origin) * scale; }
  [[nodiscard]] Vec3 invert(const Vec3& q) const noexcept { return q * (1.0 / scale) + origin; }
  /// Translation term of the affine map: apply(p) = scale * p + offset().
  [[nodiscard]] Vec3 offset() const noexcept { return origin * -scale; }
};

enum class CloudFormat { Xyz, Ply };

/// Picks the format from the extension (`.ply` or anything else as XYZ).
CloudFormat format_from_path(const std::filesystem::path& path);
CloudFormat parse_cloud_format(std::string_view name);

PointCloud load_point_cloud(const std::filesystem::path& path, CloudFormat format);
PointCloud read_xyz(std::istream& in);
PointCloud read_ply(std::istream& in);
void write_xyz(const std::filesystem::path& path, const PointCloud& cloud);

/// Tight bounding box of the samples.
Aabb bounding_box(const PointCloud& cloud);

/// Tight box grown by 1/5 of each extent, split evenly between both sides.
/// Zero-extent axes are grown by 1/5 of the largest extent instead.
Aabb enlarged_aabb(const PointCloud& cloud);

/// Maps `box` into [0,1]^3 with one isotropic scale (the longest side becomes 1).
std::pair<PointCloud, NormalizationTransform> normalize(const PointCloud& cloud, const Aabb& box);
NormalizationTransform normalization_for(const Aabb& box);
Aabb transform_box(const Aabb& box, const NormalizationTransform& t);
PointCloud denormalize(const PointCloud& cloud, const NormalizationTransform& t);

}  // namespace sheetgen
