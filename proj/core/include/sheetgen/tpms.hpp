#pragma once

#include <cstdint>
#include <string_view>

#include "sheetgen/geometry_io.hpp"

namespace sheetgen {

enum class TpmsSurface { P, D, G, IWP };

TpmsSurface parse_surface(std::string_view name);
const char* surface_name(TpmsSurface s) noexcept;

/// Nodal approximation evaluated at angle-space coordinates (period 2*pi).
double tpms_value(TpmsSurface s, const Vec3& q) noexcept;
Vec3 tpms_gradient(TpmsSurface s, const Vec3& q) noexcept;

struct FixtureOptions {
  TpmsSurface surface = TpmsSurface::P;
  std::size_t samples = 10000;
  /// Uniform per-coordinate noise amplitude in model units.
  double noise = 0.0;
  /// Unit cells per axis inside the model cube [0,1]^3.
  std::size_t cells = 4;
  std::uint64_t seed = 1;
};

/// Samples of the nodal surface inside [0,1]^3: uniform volume samples pushed
/// onto the zero set by Newton steps along the gradient, kept when
/// |phi| < 1e-6 and still inside the cube.
PointCloud generate_fixture(const FixtureOptions& options);

/// Deterministic random subset keeping round(fraction * n) points.
PointCloud subsample(const PointCloud& cloud, double fraction, std::uint64_t seed);

/// Adds uniform noise in [-amplitude, amplitude] to every coordinate.
PointCloud add_uniform_noise(const PointCloud& cloud, double amplitude, std::uint64_t seed);

}  // namespace sheetgen
