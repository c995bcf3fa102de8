#pragma once

#include "sheetgen/geometry_io.hpp"
#include "sheetgen/kdtree.hpp"
#include "sheetgen/scalar_grid.hpp"

namespace sheetgen {

using NearestNeighborIndex = KdTree;

NearestNeighborIndex build_index(const PointCloud& cloud);

/// Discrete unsigned distance field: at every vertex of a corner-inclusive grid
/// over `box`, the exact Euclidean distance to the nearest cloud point.
ScalarGrid compute_dudf(const NearestNeighborIndex& index, const Aabb& box, Dims3 dims);

}  // namespace sheetgen
