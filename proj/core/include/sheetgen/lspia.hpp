#pragma once

#include <functional>

#include "sheetgen/bspline.hpp"
#include "sheetgen/scalar_grid.hpp"

namespace sheetgen {

struct FitOptions {
  Dims3 control_dims{64, 64, 64};
  double epsilon = 1e-5;
  int max_iterations = 200;
  /// Length the average error is measured against (diagonal of the input
  /// cloud's box). Non-positive means the grid box diagonal.
  double reference_length = 0.0;
};

struct FitReport {
  int iterations = 0;
  double average_error = 0.0;
  bool converged = false;
  double elapsed_seconds = 0.0;
  /// Least-squares residual sum of the zero start, then after each update.
  std::vector<double> residual_history;
};

struct FitResult {
  BSplineField field;
  FitReport report;
};

/// Least-squares progressive-iteration approximation of the grid samples by a
/// cubic B-spline over the grid's box. Starts from zero coefficients; every
/// iteration computes all residuals against the current field before updating
/// any coefficient.
FitResult lspia_fit(const ScalarGrid& grid, const FitOptions& options);

/// Mean of |d_l - f(g_l)| / reference_length over all grid samples.
double average_fit_error(const BSplineField& field, const ScalarGrid& grid, double reference_length);

}  // namespace sheetgen
