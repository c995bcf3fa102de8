#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sheetgen/error.hpp"
#include "sheetgen/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::string input;
  std::string out_dir;
  std::size_t dudf_res = 0;
  std::size_t control_dims = 0;
  double epsilon = 0.0;
  std::size_t resample_res = 0;
  double v0 = 0.0;
  double c = 0.0;
  double ce = 0.0;
  double layer_height = 0.0;
  std::size_t slice_res = 0;
  int threads = 0;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string surface;
  std::size_t samples = 0;
  double noise = 0.0;
  std::vector<std::string> models;
  std::vector<std::size_t> resolutions;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Porous sheet structure generation from point clouds"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  auto* o_config = app.add_option("--config", f.config, "JSON config file; flags override its values");
  auto* o_input = app.add_option("--input", f.input, "Input point cloud (.xyz or ASCII .ply)");
  auto* o_out = app.add_option("--out-dir", f.out_dir, "Output directory");
  auto* o_dudf = app.add_option("--dudf-res", f.dudf_res, "Distance field samples per axis");
  auto* o_ctrl = app.add_option("--control-dims", f.control_dims, "B-spline control points per axis");
  auto* o_eps = app.add_option("--epsilon", f.epsilon, "Fitting stop tolerance");
  auto* o_resample = app.add_option("--resample-res", f.resample_res, "Resampling resolution for persistence");
  auto* o_v0 = app.add_option("--v0", f.v0, "Target volume ratio in (0,1)");
  auto* o_c = app.add_option("--c", f.c, "Thickness parameter override");
  auto* o_ce = app.add_option("--ce", f.ce, "Upper end of the search interval");
  auto* o_lh = app.add_option("--layer-height", f.layer_height, "Layer height (normalized units)");
  auto* o_slice = app.add_option("--slice-res", f.slice_res, "In-plane slicing resolution");
  auto* o_threads = app.add_option("--threads", f.threads, "Worker threads");
  auto* o_seed = app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--format", f.format, "Output format for slice")->check(CLI::IsMember({"json", "svg"}));

  auto* fixture = app.add_subcommand("fixture", "Sample a TPMS point cloud into the output directory");
  auto* o_surface = fixture->add_option("--surface", f.surface, "P, D, G or IWP");
  auto* o_samples = fixture->add_option("--samples", f.samples, "Number of samples");
  auto* o_noise = fixture->add_option("--noise", f.noise, "Uniform noise amplitude");
  auto* fit = app.add_subcommand("fit", "Distance field and B-spline fit");
  auto* ph = app.add_subcommand("ph", "Persistence diagram of the fitted field");
  auto* thresholds = app.add_subcommand("thresholds", "Cluster the diagram and derive thickness thresholds");
  auto* generate = app.add_subcommand("generate", "Choose the thickness parameter");
  auto* slice = app.add_subcommand("slice", "Slice the structure directly from the field");
  auto* mesh = app.add_subcommand("mesh", "Marching-cubes mesh and STL export");
  auto* run = app.add_subcommand("run", "Run every stage and write report.json");
  auto* bench = app.add_subcommand("bench", "Direct vs. mesh-based slicing timings");
  auto* o_models = bench->add_option("--models", f.models, "Fixture surfaces to benchmark");
  auto* o_res = bench->add_option("--resolutions", f.resolutions, "Resolutions to benchmark");

  CLI11_PARSE(app, argc, argv);

  try {
    sheetgen::PipelineConfig config;
    if (*o_config) config = sheetgen::load_config(f.config);
    if (*o_input) config.input = f.input;
    if (*o_out) config.out_dir = f.out_dir;
    if (*o_dudf) config.dudf_res = f.dudf_res;
    if (*o_ctrl) config.control_dims = f.control_dims;
    if (*o_eps) config.epsilon = f.epsilon;
    if (*o_resample) config.resample_res = f.resample_res;
    if (*o_v0) config.v0 = f.v0;
    if (*o_c) config.c = f.c;
    if (*o_ce) config.c_e = f.ce;
    if (*o_lh) config.layer_height = f.layer_height;
    if (*o_slice) config.slice_res = f.slice_res;
    if (*o_threads) config.threads = f.threads;
    if (*o_seed) config.seed = f.seed;
    if (*o_surface) config.fixture_surface = sheetgen::parse_surface(f.surface);
    if (*o_samples) config.fixture_samples = f.samples;
    if (*o_noise) config.fixture_noise = f.noise;
    if (*o_models) config.bench_models = f.models;
    if (*o_res) config.bench_resolutions = f.resolutions;
    sheetgen::validate(config);
    sheetgen::apply_thread_count(config.threads);

    if (*fixture) sheetgen::stage_fixture(config);
    else if (*fit) sheetgen::stage_fit(config);
    else if (*ph) sheetgen::stage_persistence(config);
    else if (*thresholds) sheetgen::stage_thresholds(config);
    else if (*generate) sheetgen::stage_generate(config);
    else if (*slice) sheetgen::stage_slice(config, f.format);
    else if (*mesh) sheetgen::stage_mesh(config);
    else if (*run) sheetgen::run_pipeline(config);
    else if (*bench) std::cout << sheetgen::bench_csv(sheetgen::benchmark(config));
  } catch (const sheetgen::Error& e) {
    std::cerr << "error[" << sheetgen::to_string(e.code()) << "]: " << e.what() << '\n';
    return e.code() == sheetgen::ErrorCode::Config ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
