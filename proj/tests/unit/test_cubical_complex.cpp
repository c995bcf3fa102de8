#include <doctest.h>

#include <algorithm>
#include <random>

#include "sheetgen/cubical_complex.hpp"
#include "support.hpp"

using namespace sheetgen;

namespace {

ScalarGrid grid_of(Dims3 dims, std::vector<double> values) {
  return ScalarGrid(dims, {0, 0, 0}, {1, 1, 1}, std::move(values));
}

// Maximum over the vertices spanned by a cell, straight from the definition.
double vertex_max(const ScalarGrid& g, std::array<std::size_t, 3> co) {
  double m = -1e300;
  for (std::size_t k = co[2] / 2; k <= (co[2] + 1) / 2; ++k)
    for (std::size_t j = co[1] / 2; j <= (co[1] + 1) / 2; ++j)
      for (std::size_t i = co[0] / 2; i <= (co[0] + 1) / 2; ++i) m = std::max(m, g.at(i, j, k));
  return m;
}

}  // namespace

TEST_CASE("two vertices and an edge") {
  const auto cx = build_complex(grid_of({2, 1, 1}, {0, 1}));
  REQUIRE(cx.cell_count() == 3);
  CHECK(cx.top_dimension() == 1);
  CHECK(cx.dimension(0) == 0);
  CHECK(cx.dimension(1) == 1);
  CHECK(cx.dimension(2) == 0);
  CHECK(cx.value(0) == 0.0);
  CHECK(cx.value(1) == 1.0);
  CHECK(cx.value(2) == 1.0);
}

TEST_CASE("constant square") {
  const auto cx = build_complex(grid_of({2, 2, 1}, std::vector<double>(4, 0.0)));
  REQUIRE(cx.cell_count() == 9);
  CHECK(cx.top_dimension() == 2);
  std::array<int, 3> by_dim{};
  for (std::size_t c = 0; c < cx.cell_count(); ++c) {
    ++by_dim[static_cast<std::size_t>(cx.dimension(c))];
    CHECK(cx.value(c) == 0.0);
  }
  CHECK(by_dim == std::array<int, 3>{4, 4, 1});
}

TEST_CASE("cell values are vertex maxima") {
  std::mt19937_64 rng(11);
  const ScalarGrid g = testing::random_integer_grid({3, 3, 3}, 9, rng);
  const auto cx = build_complex(g);
  REQUIRE(cx.cell_count() == 125);
  CHECK(cx.top_dimension() == 3);
  for (std::size_t c = 0; c < cx.cell_count(); ++c) CHECK(cx.value(c) == vertex_max(g, cx.coordinates(c)));
}

TEST_CASE("faces and cofaces are consistent") {
  std::mt19937_64 rng(12);
  const ScalarGrid g = testing::random_integer_grid({4, 3, 2}, 5, rng);
  const auto cx = build_complex(g);
  CHECK(cx.cell_count() == 7 * 5 * 3);
  std::vector<std::size_t> faces;
  std::vector<std::size_t> cofaces;
  for (std::size_t c = 0; c < cx.cell_count(); ++c) {
    cx.faces(c, faces);
    CHECK(faces.size() == 2 * static_cast<std::size_t>(cx.dimension(c)));
    for (auto f : faces) {
      CHECK(cx.dimension(f) == cx.dimension(c) - 1);
      CHECK(cx.value(f) <= cx.value(c));
      cx.cofaces(f, cofaces);
      CHECK(std::find(cofaces.begin(), cofaces.end(), c) != cofaces.end());
    }
    cx.cofaces(c, cofaces);
    for (auto up : cofaces) CHECK(cx.dimension(up) == cx.dimension(c) + 1);
  }
}
