#include "sheetgen/thickness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sheetgen/error.hpp"

namespace sheetgen {

Cluster finite_points(const PersistenceDiagram& pd, int k) {
  Cluster out;
  for (const auto& p : pd.pairs()) {
    if (p.dimension != k || p.essential()) continue;
    out.push_back({p.birth, p.death, p.multiplicity});
  }
  return out;
}

std::size_t cluster_size(const Cluster& c) noexcept {
  std::size_t n = 0;
  for (const auto& p : c) n += p.multiplicity;
  return n;
}

namespace {

// Two-cluster single-linkage cut of 1-D features: the largest gap between
// consecutive sorted values. Returns the indices above the cut.
std::vector<std::size_t> upper_side_of_largest_gap(const std::vector<double>& feature) {
  std::vector<std::size_t> order(feature.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return feature[a] < feature[b]; });
  double best_gap = -1.0;
  std::size_t cut = 0;
  for (std::size_t r = 1; r < order.size(); ++r) {
    const double gap = feature[order[r]] - feature[order[r - 1]];
    if (gap >= best_gap) {
      best_gap = gap;
      cut = r;
    }
  }
  return {order.begin() + static_cast<std::ptrdiff_t>(cut), order.end()};
}

void split_by_mask(const Cluster& in, const std::vector<std::size_t>& upper, Cluster& hi, Cluster& lo) {
  std::vector<char> is_upper(in.size(), 0);
  for (auto i : upper) is_upper[i] = 1;
  for (std::size_t i = 0; i < in.size(); ++i) (is_upper[i] ? hi : lo).push_back(in[i]);
}

struct KernelSummary {
  std::vector<double> density;  // t at each cluster point
  double t_max = 0.0;
  double b_max = 0.0;
  double bandwidth = 0.0;
  double n = 0.0;
};

double kernel_sum(double x, double y, const Cluster& cluster, double h, double n) {
  double s = 0.0;
  for (const auto& p : cluster) {
    const double dx = x - p.birth;
    const double dy = y - p.death;
    s += static_cast<double>(p.multiplicity) * std::exp(-(dx * dx + dy * dy) / h);
  }
  return s / (n * h);
}

KernelSummary summarize(const Cluster& cluster) {
  const std::size_t n = cluster_size(cluster);
  if (n == 0) throw Error(ErrorCode::EmptyCluster, "significance needs a non-empty cluster");
  KernelSummary k;
  k.n = static_cast<double>(n);
  // Scott's rule as h = n^(-1/(dim+4)) with dim = 2.
  k.bandwidth = std::pow(k.n, -1.0 / 6.0);
  // The kernel is symmetric, so each pair is evaluated once.
  const std::size_t m = cluster.size();
  k.density.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = cluster[i];
    const auto wi = static_cast<double>(p.multiplicity);
    double row = wi;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dx = p.birth - cluster[j].birth;
      const double dy = p.death - cluster[j].death;
      const double e = std::exp(-(dx * dx + dy * dy) / k.bandwidth);
      row += static_cast<double>(cluster[j].multiplicity) * e;
      k.density[j] += wi * e;
    }
    k.density[i] += row;
  }
  for (std::size_t i = 0; i < m; ++i) {
    k.density[i] /= k.n * k.bandwidth;
    k.t_max = std::max(k.t_max, k.density[i]);
    k.b_max = std::max(k.b_max, cluster[i].birth);
  }
  return k;
}

double birth_factor(double x, double b_max) {
  if (b_max == 0.0) {
    if (x > 0.0) throw Error(ErrorCode::Domain, "birth exceeds b_max = 0");
    return 1.0;
  }
  if (x > b_max) throw Error(ErrorCode::Domain, "birth exceeds the cluster's maximum birth");
  return 1.0 - x / b_max;
}

}  // namespace

PersistenceSplit split_by_persistence(const Cluster& points) {
  if (cluster_size(points) < 2) throw Error(ErrorCode::InsufficientFeatures, "need at least two 1-PD points");
  std::vector<double> persistence;
  persistence.reserve(points.size());
  for (const auto& p : points) persistence.push_back(p.persistence());
  const auto [lo, hi] = std::minmax_element(persistence.begin(), persistence.end());
  if (*lo == *hi) throw Error(ErrorCode::AmbiguousSplit, "all 1-PD points have equal persistence");

  PersistenceSplit split;
  split_by_mask(points, upper_side_of_largest_gap(persistence), split.pores, split.short_lived);
  return split;
}

double significance(double birth, double death, const Cluster& short_cluster) {
  const auto k = summarize(short_cluster);
  const double factor = birth_factor(birth, k.b_max);
  const double t = kernel_sum(birth, death, short_cluster, k.bandwidth, k.n);
  return std::clamp(factor * t / k.t_max, 0.0, 1.0);
}

std::vector<double> significance_values(const Cluster& short_cluster) {
  const auto k = summarize(short_cluster);
  std::vector<double> g(short_cluster.size());
  for (std::size_t i = 0; i < short_cluster.size(); ++i)
    g[i] = birth_factor(short_cluster[i].birth, k.b_max) * k.density[i] / k.t_max;
  return g;
}

HoleNoiseSplit split_holes_noise(const Cluster& short_cluster) {
  if (short_cluster.empty()) throw Error(ErrorCode::EmptyCluster, "short-persistence cluster is empty");
  HoleNoiseSplit out;
  out.significance = significance_values(short_cluster);
  const auto [lo, hi] = std::minmax_element(out.significance.begin(), out.significance.end());
  if (*hi - *lo < 1e-9) {
    out.noise = short_cluster;
    return out;
  }
  split_by_mask(short_cluster, upper_side_of_largest_gap(out.significance), out.holes, out.noise);
  return out;
}

ClusterPartition partition_diagram(const PersistenceDiagram& pd) {
  auto split = split_by_persistence(finite_points(pd, 1));
  ClusterPartition part;
  part.pores = std::move(split.pores);
  if (!split.short_lived.empty()) {
    auto hn = split_holes_noise(split.short_lived);
    part.holes = std::move(hn.holes);
    part.noise = std::move(hn.noise);
  }
  return part;
}

ThicknessThresholds derive_thresholds(const ClusterPartition& partition) {
  if (partition.pores.empty()) throw Error(ErrorCode::NoPores, "pore cluster is empty");
  ThicknessThresholds t;
  t.c_max_1 = partition.pores.front().death;
  t.c_max_2 = partition.pores.front().death;
  for (const auto& p : partition.pores) {
    t.c_max_1 = std::min(t.c_max_1, p.death);
    t.c_max_2 = std::max(t.c_max_2, p.death);
  }
  if (partition.holes.empty()) {
    t.c_min = 0.0;
    t.notes.emplace_back("hole cluster is empty; c_min set to 0");
  } else {
    t.c_min = partition.holes.front().death;
    for (const auto& p : partition.holes) t.c_min = std::max(t.c_min, p.death);
  }
  if (t.c_min >= t.c_max_1)
    t.warnings.emplace_back("inconsistent range: c_min >= c_max_1, no thickness keeps every pore open "
                            "while closing every extra hole");
  return t;
}

std::size_t pore_hole_count(const PersistenceDiagram& pd, const Cluster& noise, double c) {
  std::size_t noise_alive = 0;
  for (const auto& p : noise)
    if (p.birth <= c && c < p.death) noise_alive += p.multiplicity;
  const std::size_t alive = betti_curve(pd, 1, c);
  return alive >= noise_alive ? alive - noise_alive : 0;
}

double topological_measurement(const PersistenceDiagram& pd, const ClusterPartition& partition, double c,
                               double c_min) {
  const std::size_t base = pore_hole_count(pd, partition.noise, c_min);
  if (base == 0) throw Error(ErrorCode::Division, "B(c_min) is zero; topological measurement undefined");
  return static_cast<double>(pore_hole_count(pd, partition.noise, c)) / static_cast<double>(base);
}

std::vector<MeasurementSample> measurement_sweep(const PersistenceDiagram& pd, const ClusterPartition& partition,
                                                 const ThicknessThresholds& t) {
  std::vector<double> levels;
  if (t.c_min > 0.0) levels.push_back(0.5 * t.c_min);
  levels.push_back(t.c_min);
  if (t.c_min < t.c_max_1) levels.push_back(0.5 * (t.c_min + t.c_max_1));
  levels.push_back(t.c_max_1);
  levels.push_back(t.c_max_2);
  levels.push_back(t.c_max_2 * 1.1 + 1e-6);

  std::vector<MeasurementSample> out;
  for (double c : levels) {
    MeasurementSample s;
    s.c = c;
    s.count = pore_hole_count(pd, partition.noise, c);
    s.beta_bar = topological_measurement(pd, partition, c, t.c_min);
    out.push_back(s);
  }
  return out;
}

}  // namespace sheetgen
