#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sheetgen/bspline.hpp"
#include "sheetgen/thickness.hpp"

namespace sheetgen {

/// Solid region { p : f(p) <= c }. `bounds` is the box the volume ratio is
/// measured against (the tight box of the input samples).
struct SheetStructure {
  BSplineField field;
  double c = 0.0;
  Aabb bounds;

  SheetStructure(BSplineField f, double thickness_parameter);
  SheetStructure(BSplineField f, double thickness_parameter, Aabb volume_box);

  [[nodiscard]] bool contains(const Vec3& p) const { return field.eval(p) <= c; }
  [[nodiscard]] double thickness() const noexcept { return 2.0 * c; }
};

/// Fraction of the cell centres of a res^3 partition of `bounds` where f <= c.
double volume_ratio(const SheetStructure& structure, Dims3 resolution);

/// Sorted field samples over the volume box; V(c) is then a binary search.
class VolumeProfile {
public:
  VolumeProfile(const BSplineField& field, const Aabb& bounds, Dims3 resolution);

  [[nodiscard]] double ratio(double c) const;

private:
  std::vector<double> sorted_;
};

struct ThicknessChoice {
  double c = 0.0;
  double objective = 0.0;
  double volume_ratio = 0.0;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  int iterations = 0;
  bool some_pores_may_close = false;
  bool all_pores_may_close = false;
  std::vector<std::string> notes;
};

struct ChooseOptions {
  double v0 = 0.5;
  /// Upper end of the half-open interval; defaults to c_max_1.
  std::optional<double> c_e;
  Dims3 resolution{128, 128, 128};
};

/// Minimises |V(c) - V0| over [c_min, c_e) by bisection on the monotone V(c).
ThicknessChoice choose_thickness(const BSplineField& field, const Aabb& bounds,
                                 const ThicknessThresholds& thresholds, const ChooseOptions& options);

}  // namespace sheetgen
