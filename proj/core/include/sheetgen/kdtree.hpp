#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sheetgen/geometry_io.hpp"

namespace sheetgen {

struct NearestResult {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Static 3-d tree with axis-aligned median splits. Queries are exact.
/// Read-only after construction, so concurrent queries are safe.
class KdTree {
public:
  explicit KdTree(const PointCloud& cloud, std::size_t leaf_size = 8);

  [[nodiscard]] NearestResult nearest(const Vec3& query) const;
  [[nodiscard]] double distance(const Vec3& query) const { return nearest(query).distance; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }

private:
  struct Node {
    // Leaves: [begin, end) into points_. Inner nodes: children at left/right.
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint8_t axis = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const Vec3& q, NearestResult& best, double& best_sq) const;

  std::vector<Vec3> points_;
  std::vector<std::size_t> original_index_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
};

}  // namespace sheetgen
