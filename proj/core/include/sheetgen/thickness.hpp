#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sheetgen/persistence.hpp"

namespace sheetgen {

/// A 1-PD location with its multiplicity.
struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
  std::size_t multiplicity = 1;

  [[nodiscard]] double persistence() const noexcept { return death - birth; }
  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

using Cluster = std::vector<DiagramPoint>;

/// Finite 1-dimensional points of a diagram; essential points are dropped.
Cluster finite_points(const PersistenceDiagram& pd, int k = 1);

[[nodiscard]] std::size_t cluster_size(const Cluster& c) noexcept;

struct PersistenceSplit {
  Cluster pores;
  Cluster short_lived;
};

/// First round: single-linkage two-cluster cut of the points projected on
/// y = -x, i.e. the largest gap between consecutive persistence values.
PersistenceSplit split_by_persistence(const Cluster& points);

/// g(x,y) = (1 - x/b_max) t(x,y)/t_max over the short-persistence cluster,
/// with t a Gaussian kernel sum of bandwidth h = n^(-1/6).
double significance(double birth, double death, const Cluster& short_cluster);
std::vector<double> significance_values(const Cluster& short_cluster);

struct HoleNoiseSplit {
  Cluster holes;
  Cluster noise;
  std::vector<double> significance;  // parallel to the input cluster
};

/// Second round: largest-gap cut on significance values. Spread below 1e-9
/// means no holes.
HoleNoiseSplit split_holes_noise(const Cluster& short_cluster);

struct ClusterPartition {
  Cluster pores;
  Cluster holes;
  Cluster noise;
};

/// Both clustering rounds on the finite 1-PD points.
ClusterPartition partition_diagram(const PersistenceDiagram& pd);

struct ThicknessThresholds {
  double c_min = 0.0;
  double c_max_1 = 0.0;
  double c_max_2 = 0.0;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

ThicknessThresholds derive_thresholds(const ClusterPartition& partition);

/// B(c): alive 1-classes at c minus alive noise-cluster classes.
std::size_t pore_hole_count(const PersistenceDiagram& pd, const Cluster& noise, double c);

/// B(c) / B(c_min); throws Division when B(c_min) is zero.
double topological_measurement(const PersistenceDiagram& pd, const ClusterPartition& partition,
                               double c, double c_min);

struct MeasurementSample {
  double c = 0.0;
  std::size_t count = 0;
  double beta_bar = 0.0;
};

/// The canonical sweep reported by the pipeline: below c_min, at c_min, inside
/// [c_min, c_max_1), at c_max_1, at c_max_2 and above c_max_2.
std::vector<MeasurementSample> measurement_sweep(const PersistenceDiagram& pd,
                                                 const ClusterPartition& partition,
                                                 const ThicknessThresholds& thresholds);

}  // namespace sheetgen
