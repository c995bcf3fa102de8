#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sheetgen/tpms.hpp"
#include "support.hpp"

using namespace sheetgen;

namespace {

bool same_points(const PointCloud& a, const PointCloud& b) {
  return std::equal(a.points().begin(), a.points().end(), b.points().begin(), b.points().end());
}

Vec3 angle_space(const Vec3& p, std::size_t cells) { return 2.0 * std::numbers::pi * static_cast<double>(cells) * p; }

}  // namespace

TEST_CASE("surface names") {
  CHECK(parse_surface("P") == TpmsSurface::P);
  CHECK(parse_surface("g") == TpmsSurface::G);
  CHECK(parse_surface("I-WP") == TpmsSurface::IWP);
  CHECK(parse_surface("iwp") == TpmsSurface::IWP);
  CHECK(std::string(surface_name(TpmsSurface::D)) == "D");
  CHECK(testing::error_code_of([] { (void)parse_surface("Q"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("nodal forms") {
  const Vec3 q{0.3, -1.1, 2.0};
  CHECK(tpms_value(TpmsSurface::P, q) == doctest::Approx(std::cos(0.3) + std::cos(-1.1) + std::cos(2.0)));
  CHECK(tpms_value(TpmsSurface::G, q) == doctest::Approx(std::sin(0.3) * std::cos(-1.1) + std::sin(-1.1) * std::cos(2.0) +
                                                         std::sin(2.0) * std::cos(0.3)));
}

TEST_CASE("gradients match finite differences") {
  for (auto s : {TpmsSurface::P, TpmsSurface::D, TpmsSurface::G, TpmsSurface::IWP}) {
    for (const Vec3 q : {Vec3{0.3, -1.1, 2.0}, Vec3{1.7, 0.2, -0.4}, Vec3{-2.5, 3.1, 0.9}}) {
      const Vec3 g = tpms_gradient(s, q);
      for (std::size_t a = 0; a < 3; ++a) {
        Vec3 lo = q;
        Vec3 hi = q;
        lo[a] -= 1e-6;
        hi[a] += 1e-6;
        CHECK(g[a] == doctest::Approx((tpms_value(s, hi) - tpms_value(s, lo)) / 2e-6).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("fixture samples lie on the nodal surface") {
  for (auto s : {TpmsSurface::P, TpmsSurface::D, TpmsSurface::G, TpmsSurface::IWP}) {
    FixtureOptions opt;
    opt.surface = s;
    opt.samples = s == TpmsSurface::P ? 10000 : 2000;
    const PointCloud cloud = generate_fixture(opt);
    REQUIRE(cloud.size() == opt.samples);
    for (const auto& p : cloud.points()) {
      CHECK(std::abs(tpms_value(s, angle_space(p, opt.cells))) < 1e-6);
      for (std::size_t a = 0; a < 3; ++a) {
        CHECK(p[a] >= 0.0);
        CHECK(p[a] <= 1.0);
      }
    }
  }
}

TEST_CASE("fixture noise is bounded and seeded") {
  FixtureOptions opt;
  opt.samples = 3000;
  const PointCloud clean = generate_fixture(opt);
  opt.noise = 0.01;
  const PointCloud noisy = generate_fixture(opt);
  REQUIRE(noisy.size() == clean.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) worst = std::max(worst, distance(clean[i], noisy[i]));
  CHECK(worst <= 0.01 * std::sqrt(3.0));
  CHECK(worst > 0.0);

  const PointCloud again = generate_fixture(opt);
  CHECK(same_points(again, noisy));
  opt.seed = 2;
  CHECK_FALSE(same_points(generate_fixture(opt), noisy));
}

TEST_CASE("fixture validation") {
  FixtureOptions opt;
  opt.samples = 50;
  CHECK(testing::error_code_of([&] { (void)generate_fixture(opt); }) == ErrorCode::InvalidArgument);
  opt.samples = 1000;
  opt.noise = -1.0;
  CHECK(testing::error_code_of([&] { (void)generate_fixture(opt); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("subsampling keeps order and count") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back({static_cast<double>(i), 0, 0});
  const PointCloud cloud(pts);
  const PointCloud half = subsample(cloud, 0.45, 5);
  CHECK(half.size() == 450);
  for (std::size_t i = 1; i < half.size(); ++i) CHECK(half[i - 1].x < half[i].x);
  CHECK(same_points(subsample(cloud, 0.45, 5), half));
  CHECK(subsample(cloud, 1.0, 5).size() == 1000);
  CHECK(testing::error_code_of([&] { (void)subsample(cloud, 0.0, 5); }) == ErrorCode::InvalidArgument);
}
