#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sheetgen/distance_field.hpp"
#include "sheetgen/lspia.hpp"
#include "sheetgen/persistence.hpp"
#include "sheetgen/structure.hpp"
#include "sheetgen/thickness.hpp"
#include "sheetgen/tpms.hpp"

namespace sheetgen {

struct PipelineConfig {
  std::filesystem::path input;
  std::optional<CloudFormat> format;
  std::size_t dudf_res = 100;
  std::size_t control_dims = 64;
  double epsilon = 1e-5;
  int max_iterations = 200;
  std::size_t resample_res = 128;
  std::size_t volume_res = 128;
  double v0 = 0.5;
  std::optional<double> c;
  std::optional<double> c_e;
  double layer_height = 0.01;
  std::size_t slice_res = 100;
  std::size_t mesh_res = 100;
  std::filesystem::path out_dir = "sheetgen_out";
  std::optional<int> threads;
  std::uint64_t seed = 1;

  // `fixture` subcommand and inputs synthesised on the fly.
  TpmsSurface fixture_surface = TpmsSurface::P;
  std::size_t fixture_samples = 73600;
  double fixture_noise = 0.0;
  std::size_t fixture_cells = 4;

  // `bench` subcommand.
  std::vector<std::string> bench_models{"P"};
  std::vector<std::size_t> bench_resolutions{100};
};

/// Throws Config on the first violated invariant.
void validate(const PipelineConfig& config);

PipelineConfig load_config(const std::filesystem::path& path);
/// Applies the keys present in a JSON text on top of `config`.
void merge_config_json(PipelineConfig& config, const std::string& json_text);
std::string config_to_json(const PipelineConfig& config);

void apply_thread_count(const std::optional<int>& threads);

/// Normalised fit of one cloud. All geometry lives in normalised units.
struct FittedModel {
  NormalizationTransform transform;
  Aabb domain;        // normalised enlarged box
  Aabb cloud_bounds;  // normalised tight box of the samples
  double reference_length = 0.0;
  ScalarGrid dudf;
  FitResult fit;
};

FittedModel fit_cloud(const PointCloud& cloud, std::size_t dudf_res, const FitOptions& options);

struct TopologyAnalysis {
  PersistenceDiagram diagram;
  ClusterPartition partition;
  ThicknessThresholds thresholds;
  std::vector<MeasurementSample> sweep;
};

PersistenceDiagram field_persistence(const BSplineField& field, std::size_t resample_res);
TopologyAnalysis analyze_diagram(const PersistenceDiagram& diagram);

/// Stage entry points. Each reads its inputs from `out_dir` (or the config's
/// input cloud) and writes its artefacts there, so the pipeline can resume
/// at any stage boundary.
void stage_fixture(const PipelineConfig& config);
void stage_fit(const PipelineConfig& config);
void stage_persistence(const PipelineConfig& config);
void stage_thresholds(const PipelineConfig& config);
void stage_generate(const PipelineConfig& config);
void stage_slice(const PipelineConfig& config, const std::string& format);
void stage_mesh(const PipelineConfig& config);

/// Runs every stage, records a MANIFEST after each and writes report.json.
/// Errors are rethrown prefixed with the failing stage name.
void run_pipeline(const PipelineConfig& config);

struct BenchRow {
  std::string model;
  std::size_t resolution = 0;
  std::size_t layers = 0;
  double t_direct = 0.0;
  double t_traditional = 0.0;
  [[nodiscard]] double ratio() const noexcept { return t_direct > 0.0 ? t_traditional / t_direct : 0.0; }
};

/// Direct slicing vs. marching cubes + mesh slicing on a fitted structure at
/// res^2 in-plane resolution and layer height = z-extent / res.
BenchRow benchmark_slicing(const std::string& model, const SheetStructure& structure, std::size_t resolution);

/// One row per (model, resolution) in the config; writes bench.csv.
std::vector<BenchRow> benchmark(const PipelineConfig& config);
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace sheetgen
