#pragma once

#include <array>
#include <string>
#include <vector>

#include "sheetgen/structure.hpp"

namespace sheetgen {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Closed polygon; the first vertex is repeated at the end.
using Contour = std::vector<Point2>;

struct Layer {
  double z = 0.0;
  std::vector<Contour> contours;
};

double signed_area(const Contour& contour);

/// Marching squares on f(x, y, z0) = c over an nx x ny lattice spanning the
/// field domain. Saddle cells are resolved with f at the cell centre. Samples
/// outside the lattice count as outside the solid, so every loop closes.
/// Outer boundaries come out counter-clockwise, holes clockwise.
Layer slice_layer(const SheetStructure& structure, double z0, std::array<std::size_t, 2> resolution);

struct SliceResult {
  std::vector<Layer> layers;
  std::vector<std::string> warnings;
};

/// Heights of the layers: z_min + h/2, z_min + 3h/2, ... while below z_max.
std::vector<double> layer_heights(double z_min, double z_max, double layer_height,
                                  std::vector<std::string>* warnings = nullptr);

SliceResult slice_all(const SheetStructure& structure, double layer_height,
                      std::array<std::size_t, 2> resolution);

/// True if two segments of different contours (or non-adjacent segments of
/// one contour) properly intersect.
bool has_crossings(const Layer& layer);

/// Symmetric Hausdorff distance between the vertex sets of two layers.
double layer_hausdorff(const Layer& a, const Layer& b);

}  // namespace sheetgen
