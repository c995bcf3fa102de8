#include "support.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>

#include <unistd.h>

#include "sheetgen/lspia.hpp"

namespace sheetgen::testing {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("sheetgen_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Aabb unit_box() { return {{0, 0, 0}, {1, 1, 1}}; }

BSplineField greville_field(Dims3 control_dims, const Aabb& domain, const Function3& fn) {
  BSplineField field(control_dims, domain);
  auto coeffs = field.coefficients();
  const Vec3 ext = domain.extent();
  for (std::size_t k = 0; k < control_dims[2]; ++k)
    for (std::size_t j = 0; j < control_dims[1]; ++j)
      for (std::size_t i = 0; i < control_dims[0]; ++i) {
        const Vec3 p{domain.min.x + ext.x * field.basis(0).greville(i), domain.min.y + ext.y * field.basis(1).greville(j),
                     domain.min.z + ext.z * field.basis(2).greville(k)};
        coeffs[field.coefficient_index(i, j, k)] = fn(p);
      }
  return field;
}

BSplineField fitted_field(const Function3& fn, const Aabb& domain, std::size_t grid_res, std::size_t control) {
  ScalarGrid grid = ScalarGrid::spanning(domain, {grid_res, grid_res, grid_res});
  auto values = grid.values();
  for (std::size_t l = 0; l < values.size(); ++l) values[l] = fn(grid.position(l));
  FitOptions options;
  options.control_dims = {control, control, control};
  options.epsilon = 1e-7;
  options.max_iterations = 400;
  return lspia_fit(grid, options).field;
}

BSplineField distance_to_center_field(std::size_t grid_res, std::size_t control) {
  const Vec3 centre{0.5, 0.5, 0.5};
  return fitted_field([&](const Vec3& p) { return distance(p, centre); }, unit_box(), grid_res, control);
}

ScalarGrid random_integer_grid(Dims3 dims, int max_value, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, max_value);
  std::vector<double> values(product(dims));
  for (auto& v : values) v = pick(rng);
  return ScalarGrid(dims, {0, 0, 0}, {1, 1, 1}, std::move(values));
}

namespace {

using Cell = std::array<std::size_t, 3>;

std::size_t gf2_rank(std::vector<std::vector<std::uint64_t>> rows) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  const std::size_t words = rows.front().size();
  for (std::size_t col = 0; col < words * 64 && rank < rows.size(); ++col) {
    const std::size_t w = col / 64;
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot][w] & bit)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && (rows[r][w] & bit))
        for (std::size_t x = 0; x < words; ++x) rows[r][x] ^= rows[rank][x];
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t brute_force_betti(const ScalarGrid& grid, int k, double level) {
  const Dims3 n = grid.dims();
  // Enumerate cells in doubled coordinates, keeping those at or below level.
  std::array<std::map<Cell, std::size_t>, 4> cells;
  for (std::size_t c = 0; c < 2 * n[2] - 1; ++c)
    for (std::size_t b = 0; b < 2 * n[1] - 1; ++b)
      for (std::size_t a = 0; a < 2 * n[0] - 1; ++a) {
        const Cell cell{a, b, c};
        double value = -1e300;
        int dim = 0;
        for (int dz = 0; dz <= static_cast<int>(c & 1U); ++dz)
          for (int dy = 0; dy <= static_cast<int>(b & 1U); ++dy)
            for (int dx = 0; dx <= static_cast<int>(a & 1U); ++dx)
              value = std::max(value, grid.at(a / 2 + dx, b / 2 + dy, c / 2 + dz));
        for (auto x : cell) dim += static_cast<int>(x & 1U);
        if (value <= level) cells[dim].emplace(cell, cells[dim].size());
      }

  // rank of the boundary map from dimension d to d-1
  auto boundary_rank = [&](int d) -> std::size_t {
    if (d < 1 || d > 3 || cells[d].empty() || cells[d - 1].empty()) return 0;
    const std::size_t words = (cells[d - 1].size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows;
    for (const auto& [cell, idx] : cells[d]) {
      std::vector<std::uint64_t> row(words, 0);
      for (int axis = 0; axis < 3; ++axis) {
        if (!(cell[axis] & 1U)) continue;
        for (int s : {-1, 1}) {
          Cell face = cell;
          face[axis] = static_cast<std::size_t>(static_cast<long>(face[axis]) + s);
          const std::size_t f = cells[d - 1].at(face);
          row[f / 64] ^= std::uint64_t{1} << (f % 64);
        }
      }
      rows.push_back(std::move(row));
    }
    return gf2_rank(std::move(rows));
  };
  if (k < 0 || k > 3) return 0;
  return cells[k].size() - boundary_rank(k) - boundary_rank(k + 1);
}

}  // namespace sheetgen::testing
