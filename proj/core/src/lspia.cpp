#include "sheetgen/lspia.hpp"

#include <chrono>
#include <cmath>

#include "sheetgen/error.hpp"
#include "tensor_ops.hpp"

namespace sheetgen {

namespace {

constexpr double kEmptySupport = 1e-12;

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double mean_abs_error(std::span<const double> data, const std::vector<double>& fitted, double length) {
  double s = 0.0;
  for (std::size_t l = 0; l < data.size(); ++l) s += std::abs(data[l] - fitted[l]);
  return s / static_cast<double>(data.size()) / length;
}

}  // namespace

FitResult lspia_fit(const ScalarGrid& grid, const FitOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  for (auto n : options.control_dims)
    if (n < 4) throw Error(ErrorCode::InvalidArgument, "cubic fitting needs at least 4 controls per axis");
  if (!(options.epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (options.max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  for (auto d : grid.dims())
    if (d < 2) throw Error(ErrorCode::InvalidArgument, "fitting needs at least 2 samples per axis");
  const auto data = grid.values();
  for (double v : data)
    if (!std::isfinite(v)) throw Error(ErrorCode::Numeric, "grid contains a non-finite sample");

  const double length = options.reference_length > 0.0 ? options.reference_length : grid.box().diagonal();

  BSplineField field(options.control_dims, grid.box());
  const auto& d = grid.dims();
  const auto bx = detail::axis_basis(field, 0, grid.origin().x, grid.spacing().x, d[0]);
  const auto by = detail::axis_basis(field, 1, grid.origin().y, grid.spacing().y, d[1]);
  const auto bz = detail::axis_basis(field, 2, grid.origin().z, grid.spacing().z, d[2]);

  // Denominator of the update: sum over the support of B_i B_j B_k, which
  // factors into per-axis column sums on a tensor grid.
  const auto& n = options.control_dims;
  const auto sx = detail::basis_sums(bx, n[0]);
  const auto sy = detail::basis_sums(by, n[1]);
  const auto sz = detail::basis_sums(bz, n[2]);
  std::vector<double> weight(product(n));
  for (std::size_t k = 0; k < n[2]; ++k)
    for (std::size_t j = 0; j < n[1]; ++j)
      for (std::size_t i = 0; i < n[0]; ++i) weight[field.coefficient_index(i, j, k)] = sx[i] * sy[j] * sz[k];

  FitReport report;
  auto coeffs = field.coefficients();
  std::vector<double> fitted;
  std::vector<double> residual(data.size());
  std::vector<double> numerator;
  std::vector<double> delta(coeffs.size(), 0.0);
  std::vector<double> previous;
  double first_norm = 0.0;

  auto residuals = [&]() {
    detail::forward(coeffs, n, bx, by, bz, fitted);
    double sq = 0.0;
    for (std::size_t l = 0; l < data.size(); ++l) {
      residual[l] = data[l] - fitted[l];
      sq += residual[l] * residual[l];
    }
    if (!std::isfinite(sq)) throw Error(ErrorCode::Numeric, "non-finite residual during fitting");
    report.residual_history.push_back(sq);
  };

  residuals();
  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    detail::transpose(residual, bx, by, bz, n, numerator);
    for (std::size_t c = 0; c < delta.size(); ++c)
      delta[c] = weight[c] > kEmptySupport ? numerator[c] / weight[c] : 0.0;

    bool stop = false;
    if (iteration == 0) {
      first_norm = l2(delta);
      stop = first_norm == 0.0;
    } else {
      double diff = 0.0;
      for (std::size_t c = 0; c < delta.size(); ++c) diff += (delta[c] - previous[c]) * (delta[c] - previous[c]);
      stop = std::sqrt(diff) / first_norm < options.epsilon;
    }

    for (std::size_t c = 0; c < delta.size(); ++c) coeffs[c] += delta[c];
    ++report.iterations;
    residuals();
    if (stop) {
      report.converged = true;
      break;
    }
    previous = delta;
  }

  report.average_error = mean_abs_error(data, fitted, length);
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return FitResult{std::move(field), std::move(report)};
}

double average_fit_error(const BSplineField& field, const ScalarGrid& grid, double reference_length) {
  const auto fitted = evaluate_on_grid(field, grid);
  const std::vector<double> f(fitted.values().begin(), fitted.values().end());
  return mean_abs_error(grid.values(), f, reference_length);
}

}  // namespace sheetgen
