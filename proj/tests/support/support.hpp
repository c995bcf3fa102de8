#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>

#include "sheetgen/bspline.hpp"
#include "sheetgen/error.hpp"
#include "sheetgen/scalar_grid.hpp"

namespace sheetgen::testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

/// Code of the sheetgen::Error thrown by fn, if any.
template <class F>
std::optional<ErrorCode> error_code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

using Function3 = std::function<double(const Vec3&)>;

Aabb unit_box();

/// Coefficients set to fn at the Greville points (exact for affine fn).
BSplineField greville_field(Dims3 control_dims, const Aabb& domain, const Function3& fn);

/// LSPIA fit of fn sampled on a res^3 grid over the domain.
BSplineField fitted_field(const Function3& fn, const Aabb& domain, std::size_t grid_res, std::size_t control);

/// f(p) = |p - centre of the unit cube|, fitted.
BSplineField distance_to_center_field(std::size_t grid_res = 48, std::size_t control = 32);

/// Grid with integer values drawn uniformly from {0..max_value}.
ScalarGrid random_integer_grid(Dims3 dims, int max_value, std::mt19937_64& rng);

/// k-th Betti number over Z/2 of the sub-complex {cells : value <= level},
/// from explicit boundary matrices. Independent of the library's complex.
std::size_t brute_force_betti(const ScalarGrid& grid, int k, double level);

}  // namespace sheetgen::testing
