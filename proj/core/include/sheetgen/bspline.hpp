#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "sheetgen/geometry_io.hpp"
#include "sheetgen/scalar_grid.hpp"

namespace sheetgen {

/// Clamped uniform cubic B-spline basis on [0,1] with `count` functions.
class CubicBasis {
public:
  static constexpr int kDegree = 3;
  static constexpr int kOrder = kDegree + 1;

  explicit CubicBasis(std::size_t count);

  struct Values {
    std::size_t first = 0;           // index of the first non-zero basis function
    std::array<double, kOrder> w{};  // B_first(u) .. B_first+3(u)
  };

  /// The four non-zero basis functions at u in [0,1].
  [[nodiscard]] Values evaluate(double u) const noexcept;
  /// Averaged knot position (Greville abscissa) of basis function i.
  [[nodiscard]] double greville(std::size_t i) const noexcept;

  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] std::span<const double> knots() const noexcept { return knots_; }

private:
  std::size_t count_;
  std::vector<double> knots_;
};

/// f(x,y,z) = sum_ijk C_ijk B_i(u) B_j(v) B_k(w) with (u,v,w) the position
/// mapped affinely from `domain` onto [0,1]^3. Coefficients are stored with i
/// varying fastest.
class BSplineField {
public:
  BSplineField(Dims3 control_dims, Aabb domain);
  BSplineField(Dims3 control_dims, Aabb domain, std::vector<double> coefficients);

  [[nodiscard]] const Dims3& control_dims() const noexcept { return dims_; }
  [[nodiscard]] const Aabb& domain() const noexcept { return domain_; }
  [[nodiscard]] const CubicBasis& basis(std::size_t axis) const noexcept { return basis_[axis]; }

  [[nodiscard]] std::span<const double> coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] std::span<double> coefficients() noexcept { return coeffs_; }
  [[nodiscard]] std::size_t coefficient_index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + dims_[0] * (j + dims_[1] * k);
  }

  /// Parametric coordinate along `axis`; throws Domain outside the box.
  [[nodiscard]] double parameter(std::size_t axis, double x) const;

  /// Tensor-product value; exactly 4x4x4 basis products contribute.
  [[nodiscard]] double eval(const Vec3& p) const;

private:
  Dims3 dims_;
  Aabb domain_;
  std::array<CubicBasis, 3> basis_;
  std::vector<double> coeffs_;
};

/// Samples of every vertex of `grid`'s layout, computed separably.
ScalarGrid evaluate_on_grid(const BSplineField& field, const ScalarGrid& layout);

/// Evaluates the field on a corner-inclusive grid spanning its domain.
ScalarGrid resample(const BSplineField& field, Dims3 dims);

/// Evaluates the field on an nx x ny lattice spanning the domain in x and y at
/// height z. Values are x-fastest.
std::vector<double> evaluate_plane(const BSplineField& field, double z, std::size_t nx, std::size_t ny);

/// Binary container: "SGBSPLN1" magic, 3 x u64 control dims, 6 x f64 domain
/// (min then max), f64 coefficients.
void write_field(const std::filesystem::path& path, const BSplineField& field);
BSplineField read_field(const std::filesystem::path& path);
void write_field_json(const std::filesystem::path& path, const BSplineField& field, bool include_coefficients);

}  // namespace sheetgen
