#pragma once

#include <filesystem>
#include <limits>
#include <vector>

#include "sheetgen/cubical_complex.hpp"

namespace sheetgen {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePair {
  double birth = 0.0;
  double death = kInfinity;
  int dimension = 0;
  std::size_t multiplicity = 1;

  [[nodiscard]] bool essential() const noexcept { return death == kInfinity; }
  [[nodiscard]] double persistence() const noexcept { return death - birth; }
  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

/// Multiset of persistence pairs. Coincident (birth, death, dimension) points
/// are stored once with their multiplicity, sorted by (dimension, birth, death).
class PersistenceDiagram {
public:
  PersistenceDiagram() = default;
  /// Merges coincident points; total multiplicity is preserved.
  explicit PersistenceDiagram(std::vector<PersistencePair> pairs);

  [[nodiscard]] const std::vector<PersistencePair>& pairs() const noexcept { return pairs_; }
  [[nodiscard]] std::vector<PersistencePair> dimension(int k) const;
  /// Total number of points counted with multiplicity.
  [[nodiscard]] std::size_t total_count() const noexcept;
  [[nodiscard]] std::size_t count(int k) const noexcept;

private:
  std::vector<PersistencePair> pairs_;
};

/// Sub-level persistence of the complex in dimensions 0..top. Cells are ordered
/// by (value, dimension, index). Dimension 0 uses union-find, the top dimension
/// uses union-find on the dual graph, and the middle dimension uses mod-2
/// column reduction cleared by the top-dimension pairs. Zero-persistence pairs
/// are dropped.
PersistenceDiagram compute_persistence(const CubicalComplex& complex);

/// Number of k-dimensional points alive at level c: birth <= c < death.
std::size_t betti_curve(const PersistenceDiagram& pd, int k, double c);
std::size_t betti_curve(const std::vector<PersistencePair>& points, double c);

/// CSV with header "dimension,birth,death,multiplicity"; essential deaths are "inf".
void write_diagram_csv(const std::filesystem::path& path, const PersistenceDiagram& pd);
PersistenceDiagram read_diagram_csv(const std::filesystem::path& path);
void write_diagram_json(const std::filesystem::path& path, const PersistenceDiagram& pd);

}  // namespace sheetgen
