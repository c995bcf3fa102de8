#include "sheetgen/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "sheetgen/error.hpp"

namespace sheetgen {

namespace {

// Corner i of a cube sits at (i & 1, (i >> 1) & 1, (i >> 2) & 1).
Vec3 corner_offset(int i) { return {double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)}; }

struct CubeEdge {
  int a;
  int b;
  int axis;
};

std::array<CubeEdge, 12> make_edges() {
  std::array<CubeEdge, 12> edges{};
  int n = 0;
  for (int a = 0; a < 8; ++a)
    for (int axis = 0; axis < 3; ++axis)
      if (!(a & (1 << axis))) edges[n++] = {a, a | (1 << axis), axis};
  return edges;
}

const std::array<CubeEdge, 12> kEdges = make_edges();

int edge_between(int a, int b) {
  for (int e = 0; e < 12; ++e)
    if ((kEdges[e].a == a && kEdges[e].b == b) || (kEdges[e].a == b && kEdges[e].b == a)) return e;
  return -1;
}

struct CaseTable {
  // Triangles as local edge triples.
  std::array<std::vector<std::array<int, 3>>, 256> triangles;
};

// Bit f set when the edge lies on cube face f (2 * axis + side).
int edge_faces(int e) {
  int bits = 0;
  for (int axis = 0; axis < 3; ++axis) {
    if (axis == kEdges[e].axis) continue;
    bits |= 1 << (2 * axis + ((kEdges[e].a >> axis) & 1));
  }
  return bits;
}

// Triangulates a crossing loop without chords between two vertices on the
// same cube face. Such a chord would lie in the face, where the neighbouring
// cube may use it too, leaving an edge with four triangles.
bool triangulate_loop(const std::vector<int>& loop, std::vector<std::array<int, 3>>& out) {
  const int n = static_cast<int>(loop.size());
  auto allowed = [&](int i, int j) {
    if (j - i == 1 || (i == 0 && j == n - 1)) return true;
    return (edge_faces(loop[static_cast<std::size_t>(i)]) & edge_faces(loop[static_cast<std::size_t>(j)])) == 0;
  };
  // split[i][j]: apex k of the triangle on side (i, j), or -1 if none works.
  std::vector<std::vector<int>> split(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  std::vector<std::vector<char>> ok(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i + 1 < n; ++i) ok[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + 1)] = 1;
  for (int len = 2; len < n; ++len)
    for (int i = 0; i + len < n; ++i) {
      const int j = i + len;
      if (!allowed(i, j) && !(i == 0 && j == n - 1)) continue;
      for (int k = i + 1; k < j; ++k) {
        if (ok[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] && ok[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] &&
            allowed(i, k) && allowed(k, j)) {
          split[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = k;
          ok[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
          break;
        }
      }
    }
  if (n < 3 || !ok[0][static_cast<std::size_t>(n - 1)]) return false;
  std::vector<std::pair<int, int>> stack{{0, n - 1}};
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    stack.pop_back();
    if (j - i < 2) continue;
    const int k = split[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    out.push_back({loop[static_cast<std::size_t>(i)], loop[static_cast<std::size_t>(k)], loop[static_cast<std::size_t>(j)]});
    stack.emplace_back(i, k);
    stack.emplace_back(k, j);
  }
  return true;
}

// Builds the triangulation from face rules: on each face, segments cut off
// inside corners (diagonal faces keep the inside corners apart), oriented so
// the inside lies on the left seen from outside the cube. Chaining gives
// loops around the inside region; reversing them makes normals point out.
CaseTable build_table() {
  CaseTable table;
  for (int mask = 0; mask < 256; ++mask) {
    auto inside = [&](int c) { return (mask >> c) & 1; };
    std::array<int, 12> next;
    next.fill(-1);
    for (int axis = 0; axis < 3; ++axis) {
      const int u = 1 << ((axis + 1) % 3);
      const int v = 1 << ((axis + 2) % 3);
      for (int side = 0; side < 2; ++side) {
        const int base = side ? (1 << axis) : 0;
        const std::array<int, 4> ring = {base, base | u, base | u | v, base | v};
        Vec3 normal;
        normal[static_cast<std::size_t>(axis)] = side ? 1.0 : -1.0;
        auto midpoint = [&](int e) { return 0.5 * (corner_offset(kEdges[e].a) + corner_offset(kEdges[e].b)); };
        auto add = [&](int e0, int e1, const Vec3& ref) {
          const Vec3 p0 = midpoint(e0);
          const Vec3 p1 = midpoint(e1);
          const Vec3 mid = 0.5 * (p0 + p1);
          if (dot(cross(normal, p1 - p0), ref - mid) > 0.0) next[e0] = e1;
          else next[e1] = e0;
        };
        int count = 0;
        for (int k = 0; k < 4; ++k) count += inside(ring[k]);
        if (count == 0 || count == 4) continue;
        const bool diagonal = count == 2 && inside(ring[0]) == inside(ring[2]);
        if (diagonal) {
          for (int k = 0; k < 4; ++k) {
            if (!inside(ring[k])) continue;
            add(edge_between(ring[(k + 3) % 4], ring[k]), edge_between(ring[k], ring[(k + 1) % 4]),
                corner_offset(ring[k]));
          }
          continue;
        }
        std::vector<int> crossing;
        Vec3 ref;
        for (int k = 0; k < 4; ++k) {
          if (inside(ring[k]) != inside(ring[(k + 1) % 4])) crossing.push_back(edge_between(ring[k], ring[(k + 1) % 4]));
          if (inside(ring[k])) ref = ref + corner_offset(ring[k]);
        }
        add(crossing[0], crossing[1], (1.0 / count) * ref);
      }
    }
    std::array<bool, 12> used{};
    for (int start = 0; start < 12; ++start) {
      if (next[start] < 0 || used[start]) continue;
      std::vector<int> loop;
      for (int e = start; !used[e]; e = next[e]) {
        used[e] = true;
        loop.push_back(e);
      }
      std::reverse(loop.begin(), loop.end());
      if (!triangulate_loop(loop, table.triangles[mask]))
        throw std::logic_error("marching cubes case without a face-free triangulation");
    }
  }
  return table;
}

const CaseTable& case_table() {
  static const CaseTable table = build_table();
  return table;
}

constexpr double kClampT = 1e-6;

}  // namespace

TriangleMesh marching_cubes(const ScalarGrid& values, double iso) {
  const auto [nx, ny, nz] = values.dims();
  if (nx < 2 || ny < 2 || nz < 2) throw Error(ErrorCode::InvalidArgument, "marching cubes needs at least 2 samples per axis");
  const auto& table = case_table();
  // Extended lattice with one virtual outside layer; extended (A,B,C) is
  // lattice vertex (A-1, B-1, C-1).
  const std::size_t W = nx + 2;
  const std::size_t H = ny + 2;
  const std::size_t D = nz + 2;
  const auto vals = values.values();
  const double inf = std::numeric_limits<double>::infinity();
  auto value = [&](std::size_t A, std::size_t B, std::size_t C) {
    if (A < 1 || B < 1 || C < 1 || A > nx || B > ny || C > nz) return inf;
    return vals[(A - 1) + nx * ((B - 1) + ny * (C - 1))];
  };
  auto edge_id = [&](std::size_t A, std::size_t B, std::size_t C, int axis) {
    return static_cast<std::uint64_t>(((C * H + B) * W + A) * 3 + static_cast<std::size_t>(axis));
  };

  // Triangles per slab as global edge ids.
  std::vector<std::vector<std::array<std::uint64_t, 3>>> slabs(D - 1);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long Cs = 0; Cs < static_cast<long long>(D - 1); ++Cs) {
    const auto C = static_cast<std::size_t>(Cs);
    auto& out = slabs[C];
    for (std::size_t B = 0; B + 1 < H; ++B) {
      for (std::size_t A = 0; A + 1 < W; ++A) {
        int mask = 0;
        for (int i = 0; i < 8; ++i)
          if (value(A + (i & 1), B + ((i >> 1) & 1), C + ((i >> 2) & 1)) <= iso) mask |= 1 << i;
        for (const auto& tri : table.triangles[mask]) {
          std::array<std::uint64_t, 3> ids{};
          for (int k = 0; k < 3; ++k) {
            const auto& e = kEdges[tri[k]];
            ids[k] = edge_id(A + (e.a & 1), B + ((e.a >> 1) & 1), C + ((e.a >> 2) & 1), e.axis);
          }
          out.push_back(ids);
        }
      }
    }
  }

  TriangleMesh mesh;
  const Vec3 origin = values.origin();
  const Vec3 h = values.spacing();
  auto position = [&](std::size_t A, std::size_t B, std::size_t C) {
    return Vec3{origin.x + (double(A) - 1.0) * h.x, origin.y + (double(B) - 1.0) * h.y, origin.z + (double(C) - 1.0) * h.z};
  };
  auto make_vertex = [&](std::uint64_t id) {
    const auto axis = static_cast<int>(id % 3);
    std::size_t rest = id / 3;
    const std::size_t A = rest % W;
    rest /= W;
    const std::size_t B = rest % H;
    const std::size_t C = rest / H;
    const std::size_t A1 = A + (axis == 0);
    const std::size_t B1 = B + (axis == 1);
    const std::size_t C1 = C + (axis == 2);
    const double v0 = value(A, B, C);
    const double v1 = value(A1, B1, C1);
    double t = 0.5;  // half-way to a virtual sample
    if (std::isfinite(v0) && std::isfinite(v1)) t = std::clamp((iso - v0) / (v1 - v0), kClampT, 1.0 - kClampT);
    const Vec3 p0 = position(A, B, C);
    return p0 + t * (position(A1, B1, C1) - p0);
  };

  // Edges touched by slab C lie on levels C and C+1; keep two dense planes.
  const std::size_t plane = W * H * 3;
  std::array<std::vector<std::uint32_t>, 2> level;
  level[0].assign(plane, UINT32_MAX);
  level[1].assign(plane, UINT32_MAX);
  for (std::size_t C = 0; C + 1 < D; ++C) {
    for (const auto& ids : slabs[C]) {
      std::array<std::uint32_t, 3> tri{};
      for (int k = 0; k < 3; ++k) {
        const std::uint64_t id = ids[k];
        const std::size_t lc = static_cast<std::size_t>(id / plane) - C;
        auto& slot = level[lc][id % plane];
        if (slot == UINT32_MAX) {
          slot = static_cast<std::uint32_t>(mesh.vertices.size());
          mesh.vertices.push_back(make_vertex(id));
        }
        tri[k] = slot;
      }
      mesh.triangles.push_back(tri);
    }
    std::vector<std::array<std::uint64_t, 3>>().swap(slabs[C]);
    std::swap(level[0], level[1]);
    level[1].assign(plane, UINT32_MAX);
  }
  return mesh;
}

TriangleMesh extract_mesh(const SheetStructure& structure, Dims3 resolution) {
  const auto layout = ScalarGrid::spanning(structure.field.domain(), resolution);
  return marching_cubes(evaluate_on_grid(structure.field, layout), structure.c);
}

namespace {

Layer slice_triangles(const TriangleMesh& mesh, const std::vector<std::uint32_t>& candidates, double z0) {
  Layer layer;
  layer.z = z0;
  const std::uint64_t n = mesh.vertices.size();
  auto key = [&](std::uint32_t a, std::uint32_t b) {
    return a < b ? std::uint64_t(a) * n + b : std::uint64_t(b) * n + a;
  };
  std::unordered_map<std::uint64_t, std::uint64_t> next;
  std::vector<std::uint64_t> starts;
  next.reserve(candidates.size() * 2);
  for (std::uint32_t t : candidates) {
    const auto& tri = mesh.triangles[t];
    std::uint64_t up = UINT64_MAX;
    std::uint64_t down = UINT64_MAX;
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = tri[k];
      const std::uint32_t b = tri[(k + 1) % 3];
      const bool a_above = mesh.vertices[a].z >= z0;
      const bool b_above = mesh.vertices[b].z >= z0;
      if (!a_above && b_above) up = key(a, b);
      if (a_above && !b_above) down = key(a, b);
    }
    if (up == UINT64_MAX || down == UINT64_MAX) continue;
    if (!next.emplace(down, up).second) throw Error(ErrorCode::OracleFailure, "mesh slice: edge used twice");
    starts.push_back(down);
  }
  auto point = [&](std::uint64_t k) {
    const Vec3& a = mesh.vertices[k / n];
    const Vec3& b = mesh.vertices[k % n];
    const double t = (z0 - a.z) / (b.z - a.z);
    return Point2{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  };
  std::unordered_map<std::uint64_t, bool> used;
  used.reserve(next.size());
  for (std::uint64_t start : starts) {
    if (used.count(start)) continue;
    Contour contour;
    std::uint64_t e = start;
    while (!used.count(e)) {
      used.emplace(e, true);
      contour.push_back(point(e));
      const auto it = next.find(e);
      if (it == next.end()) throw Error(ErrorCode::OracleFailure, "mesh slice: open chain");
      e = it->second;
    }
    if (e != start) throw Error(ErrorCode::OracleFailure, "mesh slice: chain re-entered a loop");
    contour.push_back(contour.front());
    layer.contours.push_back(std::move(contour));
  }
  return layer;
}

}  // namespace

Layer mesh_slice(const TriangleMesh& mesh, double z0) {
  std::vector<std::uint32_t> all(mesh.triangles.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
  return slice_triangles(mesh, all, z0);
}

std::vector<Layer> mesh_slice_all(const TriangleMesh& mesh, const std::vector<double>& heights) {
  if (!std::is_sorted(heights.begin(), heights.end()))
    throw Error(ErrorCode::InvalidArgument, "slice heights must be ascending");
  std::vector<std::vector<std::uint32_t>> buckets(heights.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double lo = std::min({mesh.vertices[tri[0]].z, mesh.vertices[tri[1]].z, mesh.vertices[tri[2]].z});
    const double hi = std::max({mesh.vertices[tri[0]].z, mesh.vertices[tri[1]].z, mesh.vertices[tri[2]].z});
    // Plane h cuts the triangle when lo < h <= hi.
    auto first = std::upper_bound(heights.begin(), heights.end(), lo);
    auto last = std::upper_bound(heights.begin(), heights.end(), hi);
    for (auto it = first; it != last; ++it)
      buckets[static_cast<std::size_t>(it - heights.begin())].push_back(static_cast<std::uint32_t>(t));
  }
  std::vector<Layer> layers(heights.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < static_cast<long long>(heights.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    layers[k] = slice_triangles(mesh, buckets[k], heights[k]);
  }
  return layers;
}

MeshTopology analyze_topology(const TriangleMesh& mesh) {
  MeshTopology topo;
  topo.vertices = mesh.vertices.size();
  topo.faces = mesh.triangles.size();
  std::vector<std::uint64_t> keys;
  keys.reserve(mesh.triangles.size() * 3);
  const std::uint64_t n = mesh.vertices.size();
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = tri[k];
      const std::uint32_t b = tri[(k + 1) % 3];
      keys.push_back(a < b ? a * n + b : b * n + a);
    }
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    ++topo.edges;
    if (j - i == 1) ++topo.boundary_edges;
    if (j - i > 2) ++topo.non_manifold_edges;
    i = j;
  }
  return topo;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f32(std::ostream& os, double v) {
  const auto f = static_cast<float>(v);
  std::uint32_t bits = 0;
  std::memcpy(&bits, &f, 4);
  put_u32(os, bits);
}

}  // namespace

void write_stl(const std::filesystem::path& path, const TriangleMesh& mesh) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string());
  char header[80] = {};
  std::strncpy(header, "sheetgen binary STL", sizeof header - 1);
  os.write(header, sizeof header);
  put_u32(os, static_cast<std::uint32_t>(mesh.triangles.size()));
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    Vec3 nrm = cross(b - a, c - a);
    const double len = norm(nrm);
    if (len > 0.0) nrm = (1.0 / len) * nrm;
    for (const Vec3& p : {nrm, a, b, c}) {
      put_f32(os, p.x);
      put_f32(os, p.y);
      put_f32(os, p.z);
    }
    const char attr[2] = {0, 0};
    os.write(attr, 2);
  }
  if (!os) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace sheetgen
