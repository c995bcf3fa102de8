#pragma once

// Separable tensor-product kernels shared by field evaluation and LSPIA.
// Control arrays are (n0, n1, n2) with the first index fastest; sample arrays
// are (m0, m1, m2) likewise.

#include <span>
#include <vector>

#include "sheetgen/bspline.hpp"

namespace sheetgen::detail {

using AxisBasis = std::vector<CubicBasis::Values>;

/// Basis values of every sample coordinate along one axis.
AxisBasis axis_basis(const BSplineField& field, std::size_t axis, std::span<const double> coords);
AxisBasis axis_basis(const BSplineField& field, std::size_t axis, double origin, double spacing,
                     std::size_t count);

/// samples = (Bz (x) By (x) Bx) * control
void forward(std::span<const double> control, const Dims3& control_dims, const AxisBasis& bx,
             const AxisBasis& by, const AxisBasis& bz, std::vector<double>& samples);

/// control = (Bz (x) By (x) Bx)^T * samples
void transpose(std::span<const double> samples, const AxisBasis& bx, const AxisBasis& by,
               const AxisBasis& bz, const Dims3& control_dims, std::vector<double>& control);

/// Column sums of one axis' collocation matrix.
std::vector<double> basis_sums(const AxisBasis& b, std::size_t count);

}  // namespace sheetgen::detail
