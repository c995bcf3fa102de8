#include "sheetgen/distance_field.hpp"

#include "sheetgen/error.hpp"

namespace sheetgen {

NearestNeighborIndex build_index(const PointCloud& cloud) { return KdTree(cloud); }

ScalarGrid compute_dudf(const NearestNeighborIndex& index, const Aabb& box, Dims3 dims) {
  for (auto d : dims)
    if (d < 2) throw Error(ErrorCode::InvalidArgument, "distance field needs at least 2 vertices per axis");
  ScalarGrid grid = ScalarGrid::spanning(box, dims);
  auto values = grid.values();
  const auto nz = static_cast<long long>(dims[2]);
  // Each vertex is independent, so the output does not depend on scheduling.
#pragma omp parallel for schedule(dynamic, 1)
  for (long long k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < dims[1]; ++j) {
      for (std::size_t i = 0; i < dims[0]; ++i) {
        const auto kk = static_cast<std::size_t>(k);
        values[grid.index(i, j, kk)] = index.distance(grid.position(i, j, kk));
      }
    }
  }
  return grid;
}

}  // namespace sheetgen
