#include "sheetgen/tpms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>
#include <numeric>
#include <random>
#include <string>

#include "sheetgen/error.hpp"

namespace sheetgen {

namespace {
constexpr std::size_t kOversampling = 4;
}  // namespace

TpmsSurface parse_surface(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (s == "P") return TpmsSurface::P;
  if (s == "D") return TpmsSurface::D;
  if (s == "G") return TpmsSurface::G;
  if (s == "IWP" || s == "I-WP") return TpmsSurface::IWP;
  throw Error(ErrorCode::InvalidArgument, "unknown surface '" + std::string(name) + "' (expected P, D, G or IWP)");
}

const char* surface_name(TpmsSurface s) noexcept {
  switch (s) {
    case TpmsSurface::P: return "P";
    case TpmsSurface::D: return "D";
    case TpmsSurface::G: return "G";
    case TpmsSurface::IWP: return "IWP";
  }
  return "?";
}

double tpms_value(TpmsSurface s, const Vec3& q) noexcept {
  const double sx = std::sin(q.x), sy = std::sin(q.y), sz = std::sin(q.z);
  const double cx = std::cos(q.x), cy = std::cos(q.y), cz = std::cos(q.z);
  switch (s) {
    case TpmsSurface::P: return cx + cy + cz;
    case TpmsSurface::G: return sx * cy + sy * cz + sz * cx;
    case TpmsSurface::D: return sx * sy * sz + sx * cy * cz + cx * sy * cz + cx * cy * sz;
    case TpmsSurface::IWP:
      return 2.0 * (cx * cy + cy * cz + cz * cx) - (std::cos(2 * q.x) + std::cos(2 * q.y) + std::cos(2 * q.z));
  }
  return 0.0;
}

Vec3 tpms_gradient(TpmsSurface s, const Vec3& q) noexcept {
  const double sx = std::sin(q.x), sy = std::sin(q.y), sz = std::sin(q.z);
  const double cx = std::cos(q.x), cy = std::cos(q.y), cz = std::cos(q.z);
  switch (s) {
    case TpmsSurface::P: return {-sx, -sy, -sz};
    case TpmsSurface::G: return {cx * cy - sz * sx, -sx * sy + cy * cz, -sy * sz + cz * cx};
    case TpmsSurface::D:
      return {cx * sy * sz + cx * cy * cz - sx * sy * cz - sx * cy * sz,
              sx * cy * sz - sx * sy * cz + cx * cy * cz - cx * sy * sz,
              sx * sy * cz - sx * cy * sz - cx * sy * sz + cx * cy * cz};
    case TpmsSurface::IWP:
      return {-2.0 * sx * (cy + cz) + 2.0 * std::sin(2 * q.x), -2.0 * sy * (cx + cz) + 2.0 * std::sin(2 * q.y),
              -2.0 * sz * (cx + cy) + 2.0 * std::sin(2 * q.z)};
  }
  return {};
}

namespace {

// Greedy sample elimination: repeatedly drops the point whose nearest
// neighbour is closest until `target` points remain, which leaves evenly
// spaced samples. Survivors keep their candidate order.
std::vector<Vec3> eliminate_to(std::vector<Vec3> pts, std::size_t target) {
  const std::size_t m = pts.size();
  if (m <= target) return pts;
  const auto g = static_cast<std::size_t>(std::max(1.0, std::floor(std::cbrt(static_cast<double>(m)) / 2.0)));
  const double cell = 1.0 / static_cast<double>(g);
  auto coord = [&](double v) {
    return std::min(g - 1, static_cast<std::size_t>(std::max(0.0, v / cell)));
  };
  std::vector<std::vector<std::uint32_t>> grid(g * g * g);
  for (std::uint32_t i = 0; i < m; ++i)
    grid[coord(pts[i].x) + g * (coord(pts[i].y) + g * coord(pts[i].z))].push_back(i);

  std::vector<char> alive(m, 1);
  std::vector<std::uint32_t> nn(m, 0);
  std::vector<std::vector<std::uint32_t>> nn_of(m);
  auto nearest = [&](std::uint32_t i) {
    const auto cx = static_cast<long>(coord(pts[i].x));
    const auto cy = static_cast<long>(coord(pts[i].y));
    const auto cz = static_cast<long>(coord(pts[i].z));
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t arg = i;
    const long G = static_cast<long>(g);
    for (long r = 0; r <= G; ++r) {
      for (long z = cz - r; z <= cz + r; ++z)
        for (long y = cy - r; y <= cy + r; ++y)
          for (long x = cx - r; x <= cx + r; ++x) {
            if (std::max({std::abs(x - cx), std::abs(y - cy), std::abs(z - cz)}) != r) continue;
            if (x < 0 || y < 0 || z < 0 || x >= G || y >= G || z >= G) continue;
            for (std::uint32_t j : grid[static_cast<std::size_t>(x + G * (y + G * z))]) {
              if (j == i || !alive[j]) continue;
              const double d = squared_distance(pts[i], pts[j]);
              if (d < best || (d == best && j < arg)) {
                best = d;
                arg = j;
              }
            }
          }
      const double reach = static_cast<double>(r) * cell;
      if (best <= reach * reach) break;
    }
    return std::pair{best, arg};
  };

  using Entry = std::tuple<double, std::uint32_t, std::uint32_t>;  // distance, point, version
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<std::uint32_t> version(m, 0);
  auto refresh = [&](std::uint32_t i) {
    const auto [d, j] = nearest(i);
    nn[i] = j;
    nn_of[j].push_back(i);
    heap.emplace(d, i, ++version[i]);
  };
  for (std::uint32_t i = 0; i < m; ++i) refresh(i);

  std::size_t count = m;
  while (count > target && !heap.empty()) {
    const auto [d, i, v] = heap.top();
    heap.pop();
    if (!alive[i] || v != version[i]) continue;
    alive[i] = 0;
    --count;
    for (std::uint32_t k : nn_of[i])
      if (alive[k] && nn[k] == i) refresh(k);
    nn_of[i].clear();
  }
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t i = 0; i < m; ++i)
    if (alive[i]) out.push_back(pts[i]);
  return out;
}

}  // namespace

PointCloud generate_fixture(const FixtureOptions& options) {
  if (options.samples < 100) throw Error(ErrorCode::InvalidArgument, "fixture needs at least 100 samples");
  if (options.cells == 0) throw Error(ErrorCode::InvalidArgument, "fixture needs at least one cell");
  if (!(options.noise >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise amplitude must be non-negative");
  const double k = 2.0 * std::numbers::pi * static_cast<double>(options.cells);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t candidates = kOversampling * options.samples;
  std::vector<Vec3> pts;
  pts.reserve(candidates);
  std::size_t attempts = 0;
  while (pts.size() < candidates) {
    if (++attempts > 100 * candidates + 1000)
      throw Error(ErrorCode::Numeric, "fixture projection failed to converge");
    Vec3 p{unit(rng), unit(rng), unit(rng)};
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      const Vec3 q = k * p;
      const double phi = tpms_value(options.surface, q);
      if (std::abs(phi) < 1e-6) {
        ok = true;
        break;
      }
      const Vec3 g = k * tpms_gradient(options.surface, q);
      const double g2 = dot(g, g);
      if (g2 < 1e-12) break;
      p = p - (phi / g2) * g;
    }
    if (!ok || p.x < 0 || p.y < 0 || p.z < 0 || p.x > 1 || p.y > 1 || p.z > 1) continue;
    pts.push_back(p);
  }
  PointCloud cloud(eliminate_to(std::move(pts), options.samples));
  return options.noise > 0.0 ? add_uniform_noise(cloud, options.noise, options.seed + 1) : cloud;
}

PointCloud subsample(const PointCloud& cloud, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(ErrorCode::InvalidArgument, "fraction must be in (0, 1]");
  const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(cloud.size())));
  if (keep == 0) throw Error(ErrorCode::EmptyInput, "subsample keeps no points");
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates, then restore input order for the kept points.
  for (std::size_t i = 0; i < keep; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  order.resize(keep);
  std::sort(order.begin(), order.end());
  std::vector<Vec3> pts;
  pts.reserve(keep);
  for (std::size_t i : order) pts.push_back(cloud[i]);
  return PointCloud(std::move(pts));
}

PointCloud add_uniform_noise(const PointCloud& cloud, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise amplitude must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  std::vector<Vec3> pts(cloud.points().begin(), cloud.points().end());
  for (auto& p : pts) {
    p.x += u(rng);
    p.y += u(rng);
    p.z += u(rng);
  }
  return PointCloud(std::move(pts));
}

}  // namespace sheetgen
