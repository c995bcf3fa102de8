#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "sheetgen/mesh.hpp"
#include "support.hpp"

using namespace sheetgen;

namespace {

const BSplineField& ball_field() {
  static const BSplineField f = testing::distance_to_center_field();
  return f;
}

double oriented_volume(const TriangleMesh& m) {
  double v = 0.0;
  for (const auto& t : m.triangles) v += dot(m.vertices[t[0]], cross(m.vertices[t[1]], m.vertices[t[2]])) / 6.0;
  return v;
}

double triangle_area(const TriangleMesh& m, const std::array<std::uint32_t, 3>& t) {
  return 0.5 * norm(cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]));
}

TriangleMesh unit_cube_mesh() {
  TriangleMesh m;
  for (int i = 0; i < 8; ++i) m.vertices.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  m.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                 {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

}  // namespace

TEST_CASE("ball mesh is a closed sphere") {
  const auto mesh = extract_mesh(SheetStructure(ball_field(), 0.3), {48, 48, 48});
  REQUIRE_FALSE(mesh.empty());
  const auto topo = analyze_topology(mesh);
  CHECK(topo.watertight());
  CHECK(topo.euler_characteristic() == 2);
  const double ball = 4.0 / 3.0 * 3.141592653589793 * 0.027;
  CHECK(std::abs(oriented_volume(mesh) - ball) < 0.02 * ball);
  for (const auto& t : mesh.triangles) {
    for (auto i : t) CHECK(i < mesh.vertices.size());
    CHECK(triangle_area(mesh, t) > 1e-12);
  }
}

TEST_CASE("iso-value below the field gives no mesh") {
  const auto f = testing::greville_field({5, 5, 5}, testing::unit_box(), [](const Vec3&) { return 1.0; });
  CHECK(extract_mesh(SheetStructure(f, 0.5), {16, 16, 16}).empty());
}

TEST_CASE("random grids give closed outward-oriented meshes") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = static_cast<std::size_t>(trial);
    const Dims3 dims{3 + t % 4, 3 + (t / 4) % 4, 3 + (t / 16) % 3};
    ScalarGrid g(dims, {0, 0, 0}, {0.5, 0.5, 0.5});
    for (auto& v : g.values()) v = u(rng);
    const auto mesh = marching_cubes(g, 0.0);
    const auto topo = analyze_topology(mesh);
    CHECK(topo.watertight());
    CHECK(topo.euler_characteristic() % 2 == 0);
    if (!mesh.empty()) CHECK(oriented_volume(mesh) > 0.0);
    for (const auto& tri : mesh.triangles) CHECK(triangle_area(mesh, tri) > 1e-12);
    for (double z : {0.1, 0.3, 0.55, 0.8}) CHECK_NOTHROW((void)mesh_slice(mesh, z));
  }
}

TEST_CASE("full lattice is wrapped by the outside padding") {
  ScalarGrid g({4, 4, 4}, {0, 0, 0}, {1, 1, 1}, std::vector<double>(64, -1.0));
  const auto mesh = marching_cubes(g, 0.0);
  const auto topo = analyze_topology(mesh);
  CHECK(topo.watertight());
  CHECK(topo.euler_characteristic() == 2);
  // Crossings toward the virtual outside sit half a cell beyond the lattice.
  CHECK(oriented_volume(mesh) == doctest::Approx(64.0).epsilon(0.2));
}

TEST_CASE("cube section is a square") {
  const Layer layer = mesh_slice(unit_cube_mesh(), 0.5);
  REQUIRE(layer.contours.size() == 1);
  const auto& c = layer.contours[0];
  CHECK(c.front() == c.back());
  CHECK(signed_area(c) == doctest::Approx(1.0));
  for (const auto& p : c) {
    const bool on_edge = std::abs(p.x) < 1e-12 || std::abs(p.x - 1) < 1e-12 || std::abs(p.y) < 1e-12 ||
                         std::abs(p.y - 1) < 1e-12;
    CHECK(on_edge);
  }
  CHECK(mesh_slice(unit_cube_mesh(), 1.5).contours.empty());
}

TEST_CASE("open meshes fail the slicing oracle") {
  auto m = unit_cube_mesh();
  m.triangles.resize(10);
  CHECK(testing::error_code_of([&] { (void)mesh_slice(m, 0.5); }) == ErrorCode::OracleFailure);
}

TEST_CASE("ball section is a circle and agrees with marching squares") {
  const std::size_t n = 48;
  const SheetStructure s(ball_field(), 0.3);
  const auto mesh = extract_mesh(s, {n, n, n});
  const double cell = 1.0 / static_cast<double>(n - 1);
  const Layer from_mesh = mesh_slice(mesh, 0.5);
  REQUIRE(from_mesh.contours.size() == 1);
  CHECK(signed_area(from_mesh.contours[0]) > 0.0);
  for (const auto& p : from_mesh.contours[0]) CHECK(std::abs(std::hypot(p.x - 0.5, p.y - 0.5) - 0.3) < cell);

  const std::vector<double> heights{0.25, 0.37, 0.5, 0.61, 0.74};
  const auto layers = mesh_slice_all(mesh, heights);
  REQUIRE(layers.size() == heights.size());
  for (std::size_t i = 0; i < heights.size(); ++i) {
    CHECK(layers[i].contours.size() == mesh_slice(mesh, heights[i]).contours.size());
    const Layer direct = slice_layer(s, heights[i], {n, n});
    CHECK(layer_hausdorff(direct, layers[i]) <= 2.0 * cell);
  }
  CHECK(testing::error_code_of([&] { (void)mesh_slice_all(mesh, {0.5, 0.4}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("binary STL layout") {
  testing::TempDir dir("stl");
  const auto mesh = extract_mesh(SheetStructure(ball_field(), 0.3), {16, 16, 16});
  write_stl(dir / "m.stl", mesh);
  CHECK(std::filesystem::file_size(dir / "m.stl") == 84 + 50 * mesh.triangles.size());
  std::ifstream in(dir / "m.stl", std::ios::binary);
  char header[80];
  in.read(header, 80);
  unsigned char count[4];
  in.read(reinterpret_cast<char*>(count), 4);
  const std::uint32_t n = count[0] | (count[1] << 8) | (count[2] << 16) | (std::uint32_t{count[3]} << 24);
  CHECK(n == mesh.triangles.size());
}
