#include "sheetgen/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "sheetgen/error.hpp"
#include "sheetgen/kdtree.hpp"

namespace sheetgen {

double signed_area(const Contour& contour) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < contour.size(); ++i)
    a += contour[i].x * contour[i + 1].y - contour[i + 1].x * contour[i].y;
  return 0.5 * a;
}

namespace {

// Cell edges in counter-clockwise order: bottom, right, top, left.
enum : std::uint8_t { kBottom = 0, kRight = 1, kTop = 2, kLeft = 3, kNone = 0xFF };

struct Segment {
  std::uint8_t from;
  std::uint8_t to;
};

// Directed segments per corner mask (bit0 = lower-left, then counter-
// clockwise), oriented so the inside lies on the left. Saddles (5 and 10)
// hold the variant for an outside centre; the inside-centre variant is in
// kSaddleInside.
constexpr Segment kCases[16][2] = {
    {{kNone, kNone}, {kNone, kNone}},    {{kBottom, kLeft}, {kNone, kNone}},
    {{kRight, kBottom}, {kNone, kNone}}, {{kRight, kLeft}, {kNone, kNone}},
    {{kTop, kRight}, {kNone, kNone}},    {{kBottom, kLeft}, {kTop, kRight}},
    {{kTop, kBottom}, {kNone, kNone}},   {{kTop, kLeft}, {kNone, kNone}},
    {{kLeft, kTop}, {kNone, kNone}},     {{kBottom, kTop}, {kNone, kNone}},
    {{kRight, kBottom}, {kLeft, kTop}},  {{kRight, kTop}, {kNone, kNone}},
    {{kLeft, kRight}, {kNone, kNone}},   {{kBottom, kRight}, {kNone, kNone}},
    {{kLeft, kBottom}, {kNone, kNone}},  {{kNone, kNone}, {kNone, kNone}},
};
constexpr Segment kSaddleInside5[2] = {{kBottom, kRight}, {kTop, kLeft}};
constexpr Segment kSaddleInside10[2] = {{kLeft, kBottom}, {kRight, kTop}};

constexpr double kClampT = 1e-6;

}  // namespace

Layer slice_layer(const SheetStructure& structure, double z0, std::array<std::size_t, 2> resolution) {
  const auto [nx, ny] = resolution;
  if (nx < 8 || ny < 8) throw Error(ErrorCode::InvalidArgument, "slice resolution must be at least 8 per axis");
  const auto& box = structure.field.domain();
  Layer layer;
  layer.z = z0;
  if (z0 < box.min.z || z0 > box.max.z) return layer;

  const double c = structure.c;
  const std::vector<double> f = evaluate_plane(structure.field, z0, nx, ny);
  const double dx = (box.max.x - box.min.x) / static_cast<double>(nx - 1);
  const double dy = (box.max.y - box.min.y) / static_cast<double>(ny - 1);

  // Lattice extended by one virtual ring of outside samples; extended corner
  // (A,B) is lattice vertex (A-1, B-1).
  const std::size_t W = nx + 2;
  const std::size_t H = ny + 2;
  auto is_lattice = [&](std::size_t A, std::size_t B) { return A >= 1 && A <= nx && B >= 1 && B <= ny; };
  auto value = [&](std::size_t A, std::size_t B) {
    return is_lattice(A, B) ? f[(A - 1) + nx * (B - 1)] : std::numeric_limits<double>::infinity();
  };
  auto position = [&](std::size_t A, std::size_t B) {
    return Point2{box.min.x + (static_cast<double>(A) - 1.0) * dx, box.min.y + (static_cast<double>(B) - 1.0) * dy};
  };
  // Edge ids: 2*(A + W*B) for (A,B)-(A+1,B), +1 for (A,B)-(A,B+1).
  auto crossing = [&](std::size_t id) {
    const std::size_t base = id / 2;
    const std::size_t A = base % W;
    const std::size_t B = base / W;
    const std::size_t A1 = (id & 1U) ? A : A + 1;
    const std::size_t B1 = (id & 1U) ? B + 1 : B;
    const double v0 = value(A, B);
    const double v1 = value(A1, B1);
    double t = 0.5;  // crossing half-way to a virtual sample
    if (std::isfinite(v0) && std::isfinite(v1)) t = std::clamp((c - v0) / (v1 - v0), kClampT, 1.0 - kClampT);
    const Point2 p0 = position(A, B);
    const Point2 p1 = position(A1, B1);
    return Point2{p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
  };

  std::vector<std::int64_t> next(2 * W * H, -1);
  std::vector<std::size_t> starts;
  for (std::size_t B = 0; B + 1 < H; ++B) {
    for (std::size_t A = 0; A + 1 < W; ++A) {
      const unsigned mask = (value(A, B) <= c ? 1U : 0U) | (value(A + 1, B) <= c ? 2U : 0U) |
                            (value(A + 1, B + 1) <= c ? 4U : 0U) | (value(A, B + 1) <= c ? 8U : 0U);
      if (mask == 0 || mask == 15) continue;
      const Segment* segs = kCases[mask];
      if (mask == 5 || mask == 10) {
        const Point2 lo = position(A, B);
        const Vec3 centre{lo.x + 0.5 * dx, lo.y + 0.5 * dy, z0};
        if (structure.field.eval(centre) <= c) segs = mask == 5 ? kSaddleInside5 : kSaddleInside10;
      }
      const std::size_t edge[4] = {2 * (A + W * B), 2 * ((A + 1) + W * B) + 1, 2 * (A + W * (B + 1)),
                                   2 * (A + W * B) + 1};
      for (int s = 0; s < 2 && segs[s].from != kNone; ++s) {
        next[edge[segs[s].from]] = static_cast<std::int64_t>(edge[segs[s].to]);
        starts.push_back(edge[segs[s].from]);
      }
    }
  }

  std::vector<char> used(next.size(), 0);
  for (std::size_t start : starts) {
    if (used[start]) continue;
    Contour contour;
    std::size_t e = start;
    while (!used[e]) {
      used[e] = 1;
      contour.push_back(crossing(e));
      if (next[e] < 0) throw Error(ErrorCode::Numeric, "marching squares produced an open chain");
      e = static_cast<std::size_t>(next[e]);
    }
    if (e != start) throw Error(ErrorCode::Numeric, "marching squares chain re-entered a loop");
    contour.push_back(contour.front());
    layer.contours.push_back(std::move(contour));
  }
  return layer;
}

std::vector<double> layer_heights(double z_min, double z_max, double layer_height, std::vector<std::string>* warnings) {
  if (!(layer_height > 0.0)) throw Error(ErrorCode::InvalidArgument, "layer height must be positive");
  if (!(z_max > z_min)) throw Error(ErrorCode::InvalidArgument, "empty z range");
  std::vector<double> heights;
  if (layer_height > z_max - z_min) {
    if (warnings) warnings->emplace_back("layer height exceeds the z-extent; slicing a single layer");
    heights.push_back(0.5 * (z_min + z_max));
    return heights;
  }
  for (std::size_t k = 0;; ++k) {
    const double z = z_min + (static_cast<double>(k) + 0.5) * layer_height;
    if (z >= z_max) break;
    heights.push_back(z);
  }
  return heights;
}

SliceResult slice_all(const SheetStructure& structure, double layer_height, std::array<std::size_t, 2> resolution) {
  SliceResult result;
  const auto& box = structure.field.domain();
  const auto heights = layer_heights(box.min.z, box.max.z, layer_height, &result.warnings);
  result.layers.resize(heights.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < static_cast<long long>(heights.size()); ++i)
    result.layers[static_cast<std::size_t>(i)] = slice_layer(structure, heights[static_cast<std::size_t>(i)], resolution);
  return result;
}

namespace {

struct Seg2 {
  Point2 a;
  Point2 b;
  std::size_t contour;
  std::size_t index;
  std::size_t count;  // segments in the contour
};

double orient(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool properly_cross(const Seg2& s, const Seg2& t) {
  const double d1 = orient(s.a, s.b, t.a);
  const double d2 = orient(s.a, s.b, t.b);
  const double d3 = orient(t.a, t.b, s.a);
  const double d4 = orient(t.a, t.b, s.b);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool adjacent(const Seg2& s, const Seg2& t) {
  if (s.contour != t.contour) return false;
  const std::size_t d = s.index > t.index ? s.index - t.index : t.index - s.index;
  return d <= 1 || d + 1 == s.count;
}

}  // namespace

bool has_crossings(const Layer& layer) {
  std::vector<Seg2> segs;
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = lo_x;
  double hi_x = -lo_x;
  double hi_y = -lo_x;
  for (std::size_t ci = 0; ci < layer.contours.size(); ++ci) {
    const auto& c = layer.contours[ci];
    const std::size_t n = c.size() > 0 ? c.size() - 1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
      segs.push_back({c[i], c[i + 1], ci, i, n});
      lo_x = std::min({lo_x, c[i].x, c[i + 1].x});
      hi_x = std::max({hi_x, c[i].x, c[i + 1].x});
      lo_y = std::min({lo_y, c[i].y, c[i + 1].y});
      hi_y = std::max({hi_y, c[i].y, c[i + 1].y});
    }
  }
  if (segs.size() < 2) return false;

  // Uniform bucket grid over the segment bounding boxes.
  const auto side = static_cast<std::size_t>(std::max(1.0, std::sqrt(static_cast<double>(segs.size()))));
  const double wx = std::max(hi_x - lo_x, 1e-300) / static_cast<double>(side);
  const double wy = std::max(hi_y - lo_y, 1e-300) / static_cast<double>(side);
  auto bucket = [&](double v, double lo, double w) {
    return std::min(side - 1, static_cast<std::size_t>(std::max(0.0, (v - lo) / w)));
  };
  std::vector<std::vector<std::size_t>> grid(side * side);
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const auto x0 = bucket(std::min(segs[s].a.x, segs[s].b.x), lo_x, wx);
    const auto x1 = bucket(std::max(segs[s].a.x, segs[s].b.x), lo_x, wx);
    const auto y0 = bucket(std::min(segs[s].a.y, segs[s].b.y), lo_y, wy);
    const auto y1 = bucket(std::max(segs[s].a.y, segs[s].b.y), lo_y, wy);
    for (auto y = y0; y <= y1; ++y)
      for (auto x = x0; x <= x1; ++x) grid[x + side * y].push_back(s);
  }
  for (const auto& cell : grid) {
    for (std::size_t i = 0; i < cell.size(); ++i)
      for (std::size_t j = i + 1; j < cell.size(); ++j) {
        const auto& s = segs[cell[i]];
        const auto& t = segs[cell[j]];
        if (!adjacent(s, t) && properly_cross(s, t)) return true;
      }
  }
  return false;
}

namespace {

std::vector<Vec3> layer_vertices(const Layer& layer) {
  std::vector<Vec3> pts;
  for (const auto& c : layer.contours)
    for (const auto& p : c) pts.push_back({p.x, p.y, 0.0});
  return pts;
}

double directed_hausdorff(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
  const KdTree tree{PointCloud(to)};
  double worst = 0.0;
  for (const auto& p : from) worst = std::max(worst, tree.distance(p));
  return worst;
}

}  // namespace

double layer_hausdorff(const Layer& a, const Layer& b) {
  const auto pa = layer_vertices(a);
  const auto pb = layer_vertices(b);
  if (pa.empty() && pb.empty()) return 0.0;
  if (pa.empty() || pb.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed_hausdorff(pa, pb), directed_hausdorff(pb, pa));
}

}  // namespace sheetgen
