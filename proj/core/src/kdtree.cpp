#include "sheetgen/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "sheetgen/error.hpp"

namespace sheetgen {

KdTree::KdTree(const PointCloud& cloud, std::size_t leaf_size)
    : points_(cloud.points().begin(), cloud.points().end()),
      original_index_(cloud.size()),
      leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  if (points_.empty()) throw Error(ErrorCode::EmptyInput, "cannot index an empty cloud");
  std::iota(original_index_.begin(), original_index_.end(), std::size_t{0});
  nodes_.reserve(2 * points_.size() / leaf_size_ + 1);
  build(0, static_cast<std::uint32_t>(points_.size()));
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= leaf_size_) return id;

  Vec3 lo = points_[begin];
  Vec3 hi = lo;
  for (auto i = begin; i < end; ++i) {
    lo = cwise_min(lo, points_[i]);
    hi = cwise_max(hi, points_[i]);
  }
  const Vec3 e = hi - lo;
  const std::uint8_t axis = e.x >= e.y && e.x >= e.z ? 0 : (e.y >= e.z ? 1 : 2);
  if (!(e[axis] > 0.0)) return id;  // all coincident: keep as a leaf

  const std::uint32_t mid = begin + (end - begin) / 2;
  // Permute points and their original indices together.
  std::vector<std::uint32_t> order(end - begin);
  std::iota(order.begin(), order.end(), begin);
  std::nth_element(order.begin(), order.begin() + (mid - begin), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return points_[a][axis] < points_[b][axis]; });
  std::vector<Vec3> p(order.size());
  std::vector<std::size_t> o(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    p[i] = points_[order[i]];
    o[i] = original_index_[order[i]];
  }
  std::copy(p.begin(), p.end(), points_.begin() + begin);
  std::copy(o.begin(), o.end(), original_index_.begin() + begin);

  nodes_[id].axis = axis;
  nodes_[id].split = points_[mid][axis];
  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(std::int32_t id, const Vec3& q, NearestResult& best, double& best_sq) const {
  const Node& node = nodes_[id];
  if (node.left < 0) {
    for (auto i = node.begin; i < node.end; ++i) {
      const double d = squared_distance(points_[i], q);
      if (d < best_sq || (d == best_sq && original_index_[i] < best.index)) {
        best_sq = d;
        best.index = original_index_[i];
      }
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const std::int32_t near = diff < 0.0 ? node.left : node.right;
  const std::int32_t far = diff < 0.0 ? node.right : node.left;
  search(near, q, best, best_sq);
  if (diff * diff <= best_sq) search(far, q, best, best_sq);
}

NearestResult KdTree::nearest(const Vec3& query) const {
  NearestResult best;
  best.index = std::numeric_limits<std::size_t>::max();
  double best_sq = std::numeric_limits<double>::infinity();
  search(0, query, best, best_sq);
  best.distance = std::sqrt(best_sq);
  return best;
}

}  // namespace sheetgen
