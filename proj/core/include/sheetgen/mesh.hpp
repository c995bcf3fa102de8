#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "sheetgen/slicing.hpp"
#include "sheetgen/structure.hpp"

namespace sheetgen {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;

  [[nodiscard]] bool empty() const noexcept { return triangles.empty(); }
};

/// Marching cubes on f = c over a res^3 lattice spanning the field domain.
/// Vertices are shared through global lattice-edge ids and samples beyond the
/// lattice count as outside, so the mesh is closed.
TriangleMesh extract_mesh(const SheetStructure& structure, Dims3 resolution);

/// Same extraction from precomputed samples (`values` on `layout`) at `iso`.
TriangleMesh marching_cubes(const ScalarGrid& values, double iso);

/// Plane/triangle intersection segments chained into closed loops. Throws
/// OracleFailure if a chain cannot be closed.
Layer mesh_slice(const TriangleMesh& mesh, double z0);

/// Slices at several heights, bucketing triangles by z-range first.
std::vector<Layer> mesh_slice_all(const TriangleMesh& mesh, const std::vector<double>& heights);

struct MeshTopology {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t faces = 0;
  std::size_t boundary_edges = 0;      // edges with one incident triangle
  std::size_t non_manifold_edges = 0;  // edges with more than two
  [[nodiscard]] long long euler_characteristic() const noexcept {
    return static_cast<long long>(vertices) - static_cast<long long>(edges) +
           static_cast<long long>(faces);
  }
  [[nodiscard]] bool watertight() const noexcept { return boundary_edges == 0 && non_manifold_edges == 0; }
};

MeshTopology analyze_topology(const TriangleMesh& mesh);

/// Binary little-endian STL: 80-byte header, u32 count, 50 bytes per triangle.
void write_stl(const std::filesystem::path& path, const TriangleMesh& mesh);

}  // namespace sheetgen
