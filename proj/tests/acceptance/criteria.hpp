#pragma once

#include <map>
#include <memory>
#include <string>

#include "sheetgen/pipeline.hpp"

namespace sheetgen::acceptance {

struct Outcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Fitted TPMS model with its topology analysis and chosen thickness.
struct Model {
  PointCloud cloud;
  FittedModel fitted;
  TopologyAnalysis topology;
  ThicknessChoice choice;
};

/// Builds each model once at the default desk-scale settings.
class Models {
public:
  const Model& get(TpmsSurface surface);
  static FittedModel fit(const PointCloud& cloud);
  static PointCloud fixture(TpmsSurface surface);

private:
  std::map<TpmsSurface, std::unique_ptr<Model>> cache_;
};

Outcome persistence_oracle();
Outcome lspia_quality(Models& models);
Outcome threshold_pattern(Models& models);
Outcome threshold_magnitudes(Models& models);
Outcome noise_robustness(Models& models);
Outcome density_robustness(Models& models);
Outcome slicing_correctness(Models& models);
Outcome slicing_performance(Models& models);
Outcome field_properties(Models& models);

}  // namespace sheetgen::acceptance
