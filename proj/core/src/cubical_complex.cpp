#include "sheetgen/cubical_complex.hpp"

#include <algorithm>

#include "sheetgen/error.hpp"

namespace sheetgen {

CubicalComplex build_complex(const ScalarGrid& grid) {
  CubicalComplex cx;
  cx.vertex_dims_ = grid.dims();
  for (std::size_t a = 0; a < 3; ++a) {
    if (grid.dims()[a] < 1) throw Error(ErrorCode::InvalidArgument, "empty grid");
    cx.cell_dims_[a] = 2 * grid.dims()[a] - 1;
    if (grid.dims()[a] > 1) ++cx.top_dim_;
  }
  if (product(cx.cell_dims_) > 0xFFFFFFFFULL)
    throw Error(ErrorCode::InvalidArgument, "grid too large for 32-bit cell indices");

  const auto& cd = cx.cell_dims_;
  cx.values_.assign(product(cd), 0.0);
  auto& v = cx.values_;
  const auto X = static_cast<long long>(cd[0]);
  const auto Y = static_cast<long long>(cd[1]);
  const auto Z = static_cast<long long>(cd[2]);

  // Vertices, then the max rule one axis at a time: a cell that is odd along
  // an axis takes the max of its two neighbours along that axis, which have
  // already been resolved on the previous passes.
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < Z; c += 2)
    for (long long b = 0; b < Y; b += 2)
      for (long long a = 0; a < X; a += 2)
        v[cx.cell_index(a, b, c)] = grid.at(a / 2, b / 2, c / 2);

#pragma omp parallel for schedule(static)
  for (long long c = 0; c < Z; c += 2)
    for (long long b = 0; b < Y; b += 2)
      for (long long a = 1; a < X; a += 2)
        v[cx.cell_index(a, b, c)] = std::max(v[cx.cell_index(a - 1, b, c)], v[cx.cell_index(a + 1, b, c)]);

#pragma omp parallel for schedule(static)
  for (long long c = 0; c < Z; c += 2)
    for (long long b = 1; b < Y; b += 2)
      for (long long a = 0; a < X; ++a)
        v[cx.cell_index(a, b, c)] = std::max(v[cx.cell_index(a, b - 1, c)], v[cx.cell_index(a, b + 1, c)]);

#pragma omp parallel for schedule(static)
  for (long long c = 1; c < Z; c += 2)
    for (long long b = 0; b < Y; ++b)
      for (long long a = 0; a < X; ++a)
        v[cx.cell_index(a, b, c)] = std::max(v[cx.cell_index(a, b, c - 1)], v[cx.cell_index(a, b, c + 1)]);

  return cx;
}

void CubicalComplex::faces(std::size_t cell, std::vector<std::size_t>& out) const {
  out.clear();
  const auto co = coordinates(cell);
  const std::size_t stride[3] = {1, cell_dims_[0], cell_dims_[0] * cell_dims_[1]};
  for (std::size_t a = 0; a < 3; ++a) {
    if (co[a] & 1U) {
      out.push_back(cell - stride[a]);
      out.push_back(cell + stride[a]);
    }
  }
}

void CubicalComplex::cofaces(std::size_t cell, std::vector<std::size_t>& out) const {
  out.clear();
  const auto co = coordinates(cell);
  const std::size_t stride[3] = {1, cell_dims_[0], cell_dims_[0] * cell_dims_[1]};
  for (std::size_t a = 0; a < 3; ++a) {
    if (co[a] & 1U) continue;
    if (co[a] > 0) out.push_back(cell - stride[a]);
    if (co[a] + 1 < cell_dims_[a]) out.push_back(cell + stride[a]);
  }
}

}  // namespace sheetgen
