#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "sheetgen/bspline.hpp"
#include "sheetgen/error.hpp"
#include "support.hpp"

using namespace sheetgen;

TEST_CASE("clamped uniform knots") {
  const CubicBasis b(6);
  const std::vector<double> expected{0, 0, 0, 0, 1.0 / 3, 2.0 / 3, 1, 1, 1, 1};
  REQUIRE(b.knots().size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(b.knots()[i] == doctest::Approx(expected[i]));
  CHECK(b.greville(0) == 0.0);
  CHECK(b.greville(5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(CubicBasis(3), Error);
}

TEST_CASE("four controls give the Bernstein basis") {
  const CubicBasis b(4);
  for (double u : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const auto v = b.evaluate(u);
    CHECK(v.first == 0);
    CHECK(v.w[0] == doctest::Approx(std::pow(1 - u, 3)));
    CHECK(v.w[1] == doctest::Approx(3 * u * std::pow(1 - u, 2)));
    CHECK(v.w[2] == doctest::Approx(3 * u * u * (1 - u)));
    CHECK(v.w[3] == doctest::Approx(u * u * u));
  }
}

TEST_CASE("partition of unity at random points") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t count : {4, 5, 17, 64}) {
    const CubicBasis b(count);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto v = b.evaluate(u(rng));
      double s = 0.0;
      for (double w : v.w) {
        CHECK(w >= -1e-15);
        s += w;
      }
      worst = std::max(worst, std::abs(s - 1.0));
      CHECK(v.first + 4 <= count);
    }
    CHECK(worst < 1e-10);
  }
  // Trivariate products sum to one as well.
  const BSplineField ones({7, 9, 5}, testing::unit_box(), std::vector<double>(7 * 9 * 5, 1.0));
  for (int i = 0; i < 1000; ++i) CHECK(std::abs(ones.eval({u(rng), u(rng), u(rng)}) - 1.0) < 1e-10);
}

TEST_CASE("zero and constant coefficients") {
  const BSplineField zero({8, 8, 8}, testing::unit_box());
  CHECK(zero.eval({0.3, 0.7, 0.1}) == 0.0);
  const Aabb box{{-1, 2, 0}, {3, 5, 0.5}};
  const BSplineField seven({6, 5, 4}, box, std::vector<double>(6 * 5 * 4, 7.0));
  CHECK(seven.eval({0.0, 3.0, 0.25}) == doctest::Approx(7.0));
  CHECK(seven.eval(box.max) == doctest::Approx(7.0));
  const ScalarGrid r = resample(seven, {4, 4, 4});
  REQUIRE(r.size() == 64);
  for (double v : r.values()) CHECK(v == doctest::Approx(7.0));
}

TEST_CASE("linear precision from Greville coefficients") {
  const auto linear = [](const Vec3& p) { return p.x + 2 * p.y + 3 * p.z; };
  const Aabb box{{0.1, -0.2, 0.0}, {0.9, 1.3, 2.0}};
  const BSplineField f = testing::greville_field({9, 6, 12}, box, linear);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const Vec3 p{box.min.x + 0.8 * u(rng), box.min.y + 1.5 * u(rng), 2.0 * u(rng)};
    CHECK(std::abs(f.eval(p) - linear(p)) < 1e-9);
  }
}

TEST_CASE("evaluation outside the domain is an error") {
  const BSplineField f({4, 4, 4}, testing::unit_box());
  try {
    (void)f.eval({1.5, 0.5, 0.5});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
  CHECK_NOTHROW((void)f.eval({1.0 + 1e-12, 0.0, 0.0}));
}

TEST_CASE("grid, plane and point evaluation agree") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> coeffs(10 * 8 * 6);
  for (auto& c : coeffs) c = u(rng);
  const Aabb box{{0, 0, 0}, {2, 1, 1.5}};
  const BSplineField f({10, 8, 6}, box, coeffs);
  const ScalarGrid g = resample(f, {13, 11, 9});
  for (std::size_t l = 0; l < g.size(); l += 7) CHECK(g.values()[l] == doctest::Approx(f.eval(g.position(l))).epsilon(1e-12));
  const double z = 0.83;
  const auto plane = evaluate_plane(f, z, 12, 10);
  for (std::size_t b = 0; b < 10; ++b)
    for (std::size_t a = 0; a < 12; ++a) {
      const Vec3 p{2.0 * a / 11.0, 1.0 * b / 9.0, z};
      CHECK(plane[a + 12 * b] == doctest::Approx(f.eval(p)).epsilon(1e-12));
    }
}

TEST_CASE("field files round trip") {
  testing::TempDir dir("field");
  std::vector<double> coeffs(5 * 6 * 7);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = std::sin(static_cast<double>(i));
  const BSplineField f({5, 6, 7}, {{-1, 0, 1}, {1, 2, 4}}, coeffs);
  write_field(dir / "f.bin", f);
  const BSplineField back = read_field(dir / "f.bin");
  CHECK(back.control_dims() == f.control_dims());
  CHECK(back.domain() == f.domain());
  CHECK(std::equal(back.coefficients().begin(), back.coefficients().end(), coeffs.begin()));
  CHECK(std::filesystem::file_size(dir / "f.bin") == 8 + 3 * 8 + 6 * 8 + coeffs.size() * 8);
  write_field_json(dir / "f.json", f, false);
  CHECK(std::filesystem::exists(dir / "f.json"));
  {
    std::ofstream bad(dir / "bad.bin", std::ios::binary);
    bad << "NOTAFIELD";
  }
  CHECK_THROWS_AS(read_field(dir / "bad.bin"), Error);
}
