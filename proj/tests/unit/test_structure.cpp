#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sheetgen/structure.hpp"
#include "support.hpp"

using namespace sheetgen;

namespace {

const BSplineField& sphere_field() {
  static const BSplineField f = testing::distance_to_center_field();
  return f;
}

ThicknessThresholds interval(double lo, double c_max_1, double c_max_2) {
  ThicknessThresholds t;
  t.c_min = lo;
  t.c_max_1 = c_max_1;
  t.c_max_2 = c_max_2;
  return t;
}

}  // namespace

TEST_CASE("constant field is all or nothing") {
  const auto f = testing::greville_field({5, 5, 5}, testing::unit_box(), [](const Vec3&) { return 0.3; });
  CHECK(volume_ratio(SheetStructure(f, 0.2), {16, 16, 16}) == 0.0);
  CHECK(volume_ratio(SheetStructure(f, 0.3 + 1e-12), {16, 16, 16}) == 1.0);
  CHECK(SheetStructure(f, 0.2).thickness() == doctest::Approx(0.4));
  CHECK(testing::error_code_of([&] { (void)volume_ratio(SheetStructure(f, 0.3), {4, 16, 16}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("ball volume") {
  const double ball = 4.0 / 3.0 * std::numbers::pi * 0.125;
  CHECK(std::abs(volume_ratio(SheetStructure(sphere_field(), 0.5), {64, 64, 64}) - ball) < 0.02);
  const VolumeProfile profile(sphere_field(), sphere_field().domain(), {64, 64, 64});
  CHECK(profile.ratio(0.5) == volume_ratio(SheetStructure(sphere_field(), 0.5), {64, 64, 64}));
}

TEST_CASE("volume ratio is monotone in c") {
  double previous = -1.0;
  for (int i = 0; i < 20; ++i) {
    const double c = 0.05 * i;
    const double v = volume_ratio(SheetStructure(sphere_field(), c), {24, 24, 24});
    CHECK(v >= previous);
    previous = v;
  }
  CHECK(previous == 1.0);
}

TEST_CASE("volume box restricts the measurement") {
  const Aabb inner{{0.25, 0.25, 0.25}, {0.75, 0.75, 0.75}};
  CHECK(volume_ratio(SheetStructure(sphere_field(), 0.45, inner), {16, 16, 16}) == 1.0);
}

TEST_CASE("choose thickness on the ball") {
  ChooseOptions opt;
  opt.v0 = 4.0 / 3.0 * std::numbers::pi * 0.125;
  opt.resolution = {64, 64, 64};
  const auto choice = choose_thickness(sphere_field(), sphere_field().domain(), interval(0.1, 0.9, 0.95), opt);
  CHECK(std::abs(choice.c - 0.5) < 0.02);
  CHECK(choice.c >= 0.1);
  CHECK(choice.c < 0.9);
  CHECK(choice.objective < 0.005);
  CHECK_FALSE(choice.some_pores_may_close);

  // Never worse than a uniform scan of the interval.
  const VolumeProfile profile(sphere_field(), sphere_field().domain(), opt.resolution);
  for (int i = 0; i < 33; ++i) {
    const double c = 0.1 + 0.8 * i / 33.0;
    CHECK(choice.objective <= std::abs(profile.ratio(c) - opt.v0));
  }
}

TEST_CASE("boundary optimum at c_min") {
  ChooseOptions opt;
  opt.resolution = {32, 32, 32};
  const VolumeProfile profile(sphere_field(), sphere_field().domain(), opt.resolution);
  opt.v0 = profile.ratio(0.4);
  const auto choice = choose_thickness(sphere_field(), sphere_field().domain(), interval(0.4, 0.8, 0.9), opt);
  CHECK(choice.c == 0.4);
  CHECK(choice.objective == 0.0);
}

TEST_CASE("unreachable target returns the closest end") {
  ChooseOptions opt;
  opt.resolution = {32, 32, 32};
  opt.v0 = 0.99;
  const auto choice = choose_thickness(sphere_field(), sphere_field().domain(), interval(0.1, 0.3, 0.4), opt);
  CHECK(choice.c < 0.3);
  CHECK(choice.c > 0.29);
  CHECK_FALSE(choice.notes.empty());
}

TEST_CASE("pore closure flags and errors") {
  ChooseOptions opt;
  opt.resolution = {16, 16, 16};
  opt.c_e = 0.5;
  auto choice = choose_thickness(sphere_field(), sphere_field().domain(), interval(0.1, 0.3, 0.6), opt);
  CHECK(choice.some_pores_may_close);
  CHECK_FALSE(choice.all_pores_may_close);
  CHECK(choice.c < 0.5);
  opt.c_e = 0.7;
  choice = choose_thickness(sphere_field(), sphere_field().domain(), interval(0.1, 0.3, 0.6), opt);
  CHECK(choice.all_pores_may_close);

  opt.c_e = 0.05;
  CHECK(testing::error_code_of([&] {
          (void)choose_thickness(sphere_field(), sphere_field().domain(), interval(0.1, 0.3, 0.6), opt);
        }) == ErrorCode::EmptyInterval);
  opt.c_e.reset();
  for (double v0 : {0.0, 1.0, 1.5}) {
    opt.v0 = v0;
    CHECK(testing::error_code_of([&] {
            (void)choose_thickness(sphere_field(), sphere_field().domain(), interval(0.1, 0.3, 0.6), opt);
          }) == ErrorCode::InvalidArgument);
  }
}
