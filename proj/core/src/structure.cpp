#include "sheetgen/structure.hpp"

#include <algorithm>
#include <cmath>

#include "sheetgen/error.hpp"

namespace sheetgen {

SheetStructure::SheetStructure(BSplineField f, double thickness_parameter)
    : field(std::move(f)), c(thickness_parameter), bounds(field.domain()) {}

SheetStructure::SheetStructure(BSplineField f, double thickness_parameter, Aabb volume_box)
    : field(std::move(f)), c(thickness_parameter), bounds(volume_box) {}

namespace {

ScalarGrid volume_samples(const BSplineField& field, const Aabb& bounds, Dims3 resolution) {
  for (auto r : resolution)
    if (r < 8) throw Error(ErrorCode::InvalidArgument, "volume resolution must be at least 8 per axis");
  // Cell-centred samples: each stands for an equal share of the box volume.
  const Vec3 ext = bounds.extent();
  const Vec3 step{ext.x / static_cast<double>(resolution[0]), ext.y / static_cast<double>(resolution[1]),
                  ext.z / static_cast<double>(resolution[2])};
  const Vec3 origin{bounds.min.x + 0.5 * step.x, bounds.min.y + 0.5 * step.y, bounds.min.z + 0.5 * step.z};
  return evaluate_on_grid(field, ScalarGrid(resolution, origin, step));
}

}  // namespace

double volume_ratio(const SheetStructure& structure, Dims3 resolution) {
  const auto grid = volume_samples(structure.field, structure.bounds, resolution);
  const auto values = grid.values();
  const auto inside = std::count_if(values.begin(), values.end(), [&](double v) { return v <= structure.c; });
  return static_cast<double>(inside) / static_cast<double>(values.size());
}

VolumeProfile::VolumeProfile(const BSplineField& field, const Aabb& bounds, Dims3 resolution) {
  const auto grid = volume_samples(field, bounds, resolution);
  sorted_.assign(grid.values().begin(), grid.values().end());
  std::sort(sorted_.begin(), sorted_.end());
}

double VolumeProfile::ratio(double c) const {
  const auto inside = std::upper_bound(sorted_.begin(), sorted_.end(), c) - sorted_.begin();
  return static_cast<double>(inside) / static_cast<double>(sorted_.size());
}

ThicknessChoice choose_thickness(const BSplineField& field, const Aabb& bounds, const ThicknessThresholds& thresholds,
                                 const ChooseOptions& options) {
  if (!(options.v0 > 0.0 && options.v0 < 1.0)) throw Error(ErrorCode::InvalidArgument, "V0 must lie in (0, 1)");
  const double lo = thresholds.c_min;
  const double c_e = options.c_e.value_or(thresholds.c_max_1);
  if (c_e < lo) throw Error(ErrorCode::EmptyInterval, "c_e is below c_min; the feasible interval is empty");

  ThicknessChoice choice;
  choice.interval_lo = lo;
  choice.interval_hi = c_e;
  choice.some_pores_may_close = c_e > thresholds.c_max_1;
  choice.all_pores_may_close = c_e >= thresholds.c_max_2;
  if (choice.all_pores_may_close)
    choice.notes.emplace_back("c_e >= c_max_2: all pores are probably closed");
  else if (choice.some_pores_may_close)
    choice.notes.emplace_back("c_e > c_max_1: some pores are probably closed");

  const VolumeProfile profile(field, bounds, options.resolution);
  auto objective = [&](double c) { return std::abs(profile.ratio(c) - options.v0); };

  const double hi = c_e > lo ? std::nextafter(c_e, lo) : lo;
  if (c_e == lo) choice.notes.emplace_back("degenerate interval [c_min, c_e); using c_min");

  // V is a monotone step function of c. Bisect until the bracket
  // V(a) < V0 <= V(b) collapses onto adjacent doubles; the better end is
  // then the exact minimiser over the interval.
  double best_c = lo;
  double best = objective(lo);
  auto consider = [&](double c) {
    const double o = objective(c);
    if (o < best) {
      best = o;
      best_c = c;
    }
  };
  consider(hi);
  if (profile.ratio(lo) < options.v0 && profile.ratio(hi) >= options.v0) {
    double a = lo;
    double b = hi;
    while (true) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      (profile.ratio(m) < options.v0 ? a : b) = m;
      ++choice.iterations;
    }
    consider(a);
    consider(b);
  } else if (profile.ratio(lo) > options.v0 + 0.005 || profile.ratio(hi) < options.v0 - 0.005) {
    choice.notes.emplace_back("V0 is not reachable on [c_min, c_e); boundary optimum returned");
  }

  choice.c = best_c;
  choice.objective = best;
  choice.volume_ratio = profile.ratio(best_c);
  return choice;
}

}  // namespace sheetgen
