#include "sheetgen/scalar_grid.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "sheetgen/error.hpp"

namespace sheetgen {

ScalarGrid::ScalarGrid(Dims3 dims, Vec3 origin, Vec3 spacing)
    : ScalarGrid(dims, origin, spacing, std::vector<double>(product(dims), 0.0)) {}

ScalarGrid::ScalarGrid(Dims3 dims, Vec3 origin, Vec3 spacing, std::vector<double> values)
    : dims_(dims), origin_(origin), spacing_(spacing), values_(std::move(values)) {
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0)
    throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  if (values_.size() != product(dims))
    throw Error(ErrorCode::InvalidArgument, "grid value count does not match its dimensions");
  for (std::size_t a = 0; a < 3; ++a) {
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
      throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
  }
}

ScalarGrid ScalarGrid::spanning(const Aabb& box, Dims3 dims) {
  Vec3 spacing;
  const Vec3 e = box.extent();
  for (std::size_t a = 0; a < 3; ++a) {
    if (dims[a] < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 vertices per axis");
    spacing[a] = e[a] / static_cast<double>(dims[a] - 1);
  }
  return ScalarGrid(dims, box.min, spacing);
}

Aabb ScalarGrid::box() const noexcept {
  return Aabb{origin_, position(dims_[0] - 1, dims_[1] - 1, dims_[2] - 1)};
}

Vec3 ScalarGrid::position(std::size_t flat) const noexcept {
  const std::size_t i = flat % dims_[0];
  const std::size_t rest = flat / dims_[0];
  return position(i, rest % dims_[1], rest / dims_[1]);
}

namespace {

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorCode::Io, "truncated grid file");
  return v;
}

}  // namespace

void write_grid(const std::filesystem::path& path, const ScalarGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  for (auto d : grid.dims()) put<std::uint64_t>(out, d);
  for (std::size_t a = 0; a < 3; ++a) put<double>(out, grid.origin()[a]);
  for (std::size_t a = 0; a < 3; ++a) put<double>(out, grid.spacing()[a]);
  const auto v = grid.values();
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
}

ScalarGrid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  Dims3 dims{};
  for (auto& d : dims) d = static_cast<std::size_t>(get<std::uint64_t>(in));
  Vec3 origin;
  Vec3 spacing;
  for (std::size_t a = 0; a < 3; ++a) origin[a] = get<double>(in);
  for (std::size_t a = 0; a < 3; ++a) spacing[a] = get<double>(in);
  std::vector<double> values(product(dims));
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw Error(ErrorCode::Io, "truncated grid file " + path.string());
  return ScalarGrid(dims, origin, spacing, std::move(values));
}

void write_grid_json(const std::filesystem::path& path, const ScalarGrid& grid, bool include_values) {
  nlohmann::json j;
  j["dims"] = grid.dims();
  j["origin"] = {grid.origin().x, grid.origin().y, grid.origin().z};
  j["spacing"] = {grid.spacing().x, grid.spacing().y, grid.spacing().z};
  j["order"] = "x-fastest";
  if (include_values) j["values"] = std::vector<double>(grid.values().begin(), grid.values().end());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace sheetgen
