#include "sheetgen/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <omp.h>

#include <json.hpp>

#include "sheetgen/cubical_complex.hpp"
#include "sheetgen/error.hpp"
#include "sheetgen/mesh.hpp"
#include "sheetgen/slice_io.hpp"
#include "sheetgen/slicing.hpp"

namespace sheetgen {

using nlohmann::json;

namespace {

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
Vec3 vec3_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }
json to_json(const Aabb& b) { return {{"min", to_json(b.min)}, {"max", to_json(b.max)}}; }
Aabb aabb_from(const json& j) { return {vec3_from(j.at("min")), vec3_from(j.at("max"))}; }

json to_json(const Cluster& c) {
  json arr = json::array();
  for (const auto& p : c) arr.push_back(json::array({p.birth, p.death, p.multiplicity}));
  return arr;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double round3(double s) { return std::round(s * 1000.0) / 1000.0; }

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "missing " + path.string() + " (run the previous stage first)");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

std::filesystem::path prepare(const PipelineConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  return config.out_dir;
}

Dims3 cube(std::size_t n) { return {n, n, n}; }

}  // namespace

void validate(const PipelineConfig& config) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::Config, msg); };
  const std::pair<const char*, std::size_t> resolutions[] = {
      {"dudf_res", config.dudf_res},     {"control_dims", config.control_dims}, {"resample_res", config.resample_res},
      {"volume_res", config.volume_res}, {"slice_res", config.slice_res},       {"mesh_res", config.mesh_res}};
  for (const auto& [name, value] : resolutions)
    if (value < 8) fail(std::string(name) + " must be at least 8");
  if (!(config.epsilon > 0.0)) fail("epsilon must be positive");
  if (config.max_iterations < 1) fail("max_iterations must be at least 1");
  if (!(config.v0 > 0.0 && config.v0 < 1.0)) fail("v0 must lie in (0, 1)");
  if (config.c && !(*config.c > 0.0)) fail("c must be positive");
  if (config.c_e && !(*config.c_e > 0.0)) fail("ce must be positive");
  if (!(config.layer_height > 0.0)) fail("layer_height must be positive");
  if (config.threads && *config.threads < 1) fail("threads must be at least 1");
  if (config.fixture_samples < 100) fail("fixture_samples must be at least 100");
  if (!(config.fixture_noise >= 0.0)) fail("fixture_noise must be non-negative");
  if (config.fixture_cells < 1) fail("fixture_cells must be at least 1");
  if (config.bench_models.empty()) fail("bench_models must not be empty");
  if (config.bench_resolutions.empty()) fail("bench_resolutions must not be empty");
  for (const auto& m : config.bench_models) {
    try {
      (void)parse_surface(m);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  for (auto r : config.bench_resolutions)
    if (r < 8) fail("bench resolutions must be at least 8");
}

void merge_config_json(PipelineConfig& config, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "input") config.input = value.get<std::string>();
      else if (key == "format")
        config.format = value.is_null() ? std::nullopt : std::optional<CloudFormat>(parse_cloud_format(value.get<std::string>()));
      else if (key == "dudf_res") config.dudf_res = value.get<std::size_t>();
      else if (key == "control_dims") config.control_dims = value.get<std::size_t>();
      else if (key == "epsilon") config.epsilon = value.get<double>();
      else if (key == "max_iterations") config.max_iterations = value.get<int>();
      else if (key == "resample_res") config.resample_res = value.get<std::size_t>();
      else if (key == "volume_res") config.volume_res = value.get<std::size_t>();
      else if (key == "v0") config.v0 = value.get<double>();
      else if (key == "c") config.c = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
      else if (key == "ce") config.c_e = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
      else if (key == "layer_height") config.layer_height = value.get<double>();
      else if (key == "slice_res") config.slice_res = value.get<std::size_t>();
      else if (key == "mesh_res") config.mesh_res = value.get<std::size_t>();
      else if (key == "out_dir") config.out_dir = value.get<std::string>();
      else if (key == "threads") config.threads = value.is_null() ? std::nullopt : std::optional<int>(value.get<int>());
      else if (key == "seed") config.seed = value.get<std::uint64_t>();
      else if (key == "fixture_surface") config.fixture_surface = parse_surface(value.get<std::string>());
      else if (key == "fixture_samples") config.fixture_samples = value.get<std::size_t>();
      else if (key == "fixture_noise") config.fixture_noise = value.get<double>();
      else if (key == "fixture_cells") config.fixture_cells = value.get<std::size_t>();
      else if (key == "bench_models") config.bench_models = value.get<std::vector<std::string>>();
      else if (key == "bench_resolutions") config.bench_resolutions = value.get<std::vector<std::size_t>>();
      else throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Config, "bad value for '" + key + "': " + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Config) throw;
      throw Error(ErrorCode::Config, "bad value for '" + key + "': " + e.what());
    }
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  PipelineConfig config;
  merge_config_json(config, ss.str());
  return config;
}

namespace {

json config_json(const PipelineConfig& config) {
  json j;
  j["input"] = config.input.string();
  j["format"] = config.format ? json(*config.format == CloudFormat::Ply ? "ply" : "xyz") : json(nullptr);
  j["dudf_res"] = config.dudf_res;
  j["control_dims"] = config.control_dims;
  j["epsilon"] = config.epsilon;
  j["max_iterations"] = config.max_iterations;
  j["resample_res"] = config.resample_res;
  j["volume_res"] = config.volume_res;
  j["v0"] = config.v0;
  j["c"] = config.c ? json(*config.c) : json(nullptr);
  j["ce"] = config.c_e ? json(*config.c_e) : json(nullptr);
  j["layer_height"] = config.layer_height;
  j["slice_res"] = config.slice_res;
  j["mesh_res"] = config.mesh_res;
  j["out_dir"] = config.out_dir.string();
  j["threads"] = config.threads ? json(*config.threads) : json(nullptr);
  j["seed"] = config.seed;
  j["fixture_surface"] = surface_name(config.fixture_surface);
  j["fixture_samples"] = config.fixture_samples;
  j["fixture_noise"] = config.fixture_noise;
  j["fixture_cells"] = config.fixture_cells;
  j["bench_models"] = config.bench_models;
  j["bench_resolutions"] = config.bench_resolutions;
  return j;
}

}  // namespace

std::string config_to_json(const PipelineConfig& config) { return config_json(config).dump(2); }

void apply_thread_count(const std::optional<int>& threads) {
  if (threads) omp_set_num_threads(*threads);
}

FittedModel fit_cloud(const PointCloud& cloud, std::size_t dudf_res, const FitOptions& options) {
  const Aabb box = enlarged_aabb(cloud);
  auto [normalized, transform] = normalize(cloud, box);
  const Aabb domain = transform_box(box, transform);
  const Aabb bounds = bounding_box(normalized);
  const double length = bounds.diagonal();
  ScalarGrid dudf = compute_dudf(build_index(normalized), domain, cube(dudf_res));
  FitOptions opts = options;
  opts.reference_length = length;
  FitResult fit = lspia_fit(dudf, opts);
  return FittedModel{transform, domain, bounds, length, std::move(dudf), std::move(fit)};
}

PersistenceDiagram field_persistence(const BSplineField& field, std::size_t resample_res) {
  return compute_persistence(build_complex(resample(field, cube(resample_res))));
}

TopologyAnalysis analyze_diagram(const PersistenceDiagram& diagram) {
  TopologyAnalysis a{diagram, partition_diagram(diagram), {}, {}};
  a.thresholds = derive_thresholds(a.partition);
  a.sweep = measurement_sweep(a.diagram, a.partition, a.thresholds);
  return a;
}

namespace {

constexpr const char* kCloudFile = "cloud.xyz";
constexpr const char* kFieldFile = "field.bin";
constexpr const char* kFitFile = "fit.json";
constexpr const char* kDiagramCsv = "diagram.csv";
constexpr const char* kDiagramJson = "diagram.json";
constexpr const char* kThicknessFile = "thickness_report.json";
constexpr const char* kStructureFile = "structure.json";
constexpr const char* kLayersFile = "layers.json";
constexpr const char* kSliceFile = "slice.json";
constexpr const char* kMeshFile = "mesh.stl";
constexpr const char* kMeshReport = "mesh.json";

FixtureOptions fixture_options(const PipelineConfig& config, TpmsSurface surface) {
  return {surface, config.fixture_samples, config.fixture_noise, config.fixture_cells, config.seed};
}

FitOptions fit_options(const PipelineConfig& config) {
  FitOptions o;
  o.control_dims = cube(config.control_dims);
  o.epsilon = config.epsilon;
  o.max_iterations = config.max_iterations;
  return o;
}

PointCloud input_cloud(const PipelineConfig& config) {
  if (!config.input.empty())
    return load_point_cloud(config.input, config.format.value_or(format_from_path(config.input)));
  const auto fixture = config.out_dir / kCloudFile;
  if (std::filesystem::exists(fixture)) return load_point_cloud(fixture, CloudFormat::Xyz);
  throw Error(ErrorCode::Config, "no input cloud: pass --input or run the fixture stage first");
}

ThicknessThresholds thresholds_from(const json& j) {
  ThicknessThresholds t;
  t.c_min = j.at("c_min").get<double>();
  t.c_max_1 = j.at("c_max_1").get<double>();
  t.c_max_2 = j.at("c_max_2").get<double>();
  return t;
}

json thresholds_json(const ThicknessThresholds& t) {
  return {{"c_min", t.c_min}, {"c_max_1", t.c_max_1}, {"c_max_2", t.c_max_2}};
}

SheetStructure load_structure(const std::filesystem::path& dir) {
  const json fit = read_json(dir / kFitFile);
  const json st = read_json(dir / kStructureFile);
  return SheetStructure(read_field(dir / kFieldFile), st.at("c").get<double>(), aabb_from(fit.at("cloud_bounds")));
}

}  // namespace

void stage_fixture(const PipelineConfig& config) {
  const auto dir = prepare(config);
  write_xyz(dir / kCloudFile, generate_fixture(fixture_options(config, config.fixture_surface)));
}

void stage_fit(const PipelineConfig& config) {
  const auto dir = prepare(config);
  const PointCloud cloud = input_cloud(config);
  const FittedModel m = fit_cloud(cloud, config.dudf_res, fit_options(config));
  write_field(dir / kFieldFile, m.fit.field);
  const auto& r = m.fit.report;
  json j;
  j["points"] = cloud.size();
  j["transform"] = {{"scale", m.transform.scale}, {"origin", to_json(m.transform.origin)}};
  j["domain"] = to_json(m.domain);
  j["cloud_bounds"] = to_json(m.cloud_bounds);
  j["reference_length"] = m.reference_length;
  j["dudf_res"] = config.dudf_res;
  j["control_dims"] = config.control_dims;
  j["epsilon"] = config.epsilon;
  j["iterations"] = r.iterations;
  j["average_error"] = r.average_error;
  j["converged"] = r.converged;
  j["residual_history"] = r.residual_history;
  j["timings"] = {{"fit_seconds", round3(r.elapsed_seconds)}};
  write_json(dir / kFitFile, j);
}

void stage_persistence(const PipelineConfig& config) {
  const auto dir = prepare(config);
  const PersistenceDiagram pd = field_persistence(read_field(dir / kFieldFile), config.resample_res);
  write_diagram_csv(dir / kDiagramCsv, pd);
  write_diagram_json(dir / kDiagramJson, pd);
}

void stage_thresholds(const PipelineConfig& config) {
  const auto dir = prepare(config);
  const TopologyAnalysis a = analyze_diagram(read_diagram_csv(dir / kDiagramCsv));
  json j;
  j["clusters"] = {{"pores", to_json(a.partition.pores)},
                   {"holes", to_json(a.partition.holes)},
                   {"noise", to_json(a.partition.noise)}};
  j["thresholds"] = thresholds_json(a.thresholds);
  json sweep = json::array();
  for (const auto& s : a.sweep) sweep.push_back({{"c", s.c}, {"count", s.count}, {"beta_bar", s.beta_bar}});
  j["sweep"] = sweep;
  j["warnings"] = a.thresholds.warnings;
  j["notes"] = a.thresholds.notes;
  write_json(dir / kThicknessFile, j);
}

void stage_generate(const PipelineConfig& config) {
  const auto dir = prepare(config);
  const json fit = read_json(dir / kFitFile);
  const Aabb bounds = aabb_from(fit.at("cloud_bounds"));
  BSplineField field = read_field(dir / kFieldFile);
  json j;
  if (config.c) {
    const SheetStructure s(field, *config.c, bounds);
    j["c"] = *config.c;
    j["provenance"] = "user-override";
    j["volume_ratio"] = volume_ratio(s, cube(config.volume_res));
  } else {
    const ThicknessThresholds t = thresholds_from(read_json(dir / kThicknessFile).at("thresholds"));
    ChooseOptions opts;
    opts.v0 = config.v0;
    opts.c_e = config.c_e;
    opts.resolution = cube(config.volume_res);
    const ThicknessChoice choice = choose_thickness(field, bounds, t, opts);
    j["c"] = choice.c;
    j["provenance"] = "optimized";
    j["volume_ratio"] = choice.volume_ratio;
    j["objective"] = choice.objective;
    j["interval"] = {choice.interval_lo, choice.interval_hi};
    j["iterations"] = choice.iterations;
    j["some_pores_may_close"] = choice.some_pores_may_close;
    j["all_pores_may_close"] = choice.all_pores_may_close;
    j["notes"] = choice.notes;
  }
  j["thickness"] = 2.0 * j["c"].get<double>();
  j["v0"] = config.v0;
  write_json(dir / kStructureFile, j);
}

void stage_slice(const PipelineConfig& config, const std::string& format) {
  if (format != "json" && format != "svg")
    throw Error(ErrorCode::InvalidArgument, "slice output format must be json or svg");
  const auto dir = prepare(config);
  const SheetStructure s = load_structure(dir);
  const auto start = std::chrono::steady_clock::now();
  const SliceResult r = slice_all(s, config.layer_height, {config.slice_res, config.slice_res});
  const double elapsed = seconds_since(start);
  if (format == "json") write_layers_json(dir / kLayersFile, r.layers);
  else write_layers_svg(dir / "layers_svg", r.layers, s.field.domain());
  std::size_t contours = 0;
  for (const auto& l : r.layers) contours += l.contours.size();
  json j;
  j["layers"] = r.layers.size();
  j["contours"] = contours;
  j["layer_height"] = config.layer_height;
  j["resolution"] = config.slice_res;
  j["warnings"] = r.warnings;
  j["timings"] = {{"direct_seconds", round3(elapsed)}};
  write_json(dir / kSliceFile, j);
}

void stage_mesh(const PipelineConfig& config) {
  const auto dir = prepare(config);
  const SheetStructure s = load_structure(dir);
  const auto& box = s.field.domain();
  const auto heights = layer_heights(box.min.z, box.max.z, config.layer_height);
  const auto start = std::chrono::steady_clock::now();
  const TriangleMesh mesh = extract_mesh(s, cube(config.mesh_res));
  const auto layers = mesh_slice_all(mesh, heights);
  const double elapsed = seconds_since(start);
  write_stl(dir / kMeshFile, mesh);
  const MeshTopology topo = analyze_topology(mesh);
  json j;
  j["vertices"] = topo.vertices;
  j["triangles"] = topo.faces;
  j["edges"] = topo.edges;
  j["boundary_edges"] = topo.boundary_edges;
  j["non_manifold_edges"] = topo.non_manifold_edges;
  j["euler_characteristic"] = topo.euler_characteristic();
  j["watertight"] = topo.watertight();
  j["resolution"] = config.mesh_res;
  j["sliced_layers"] = layers.size();
  j["timings"] = {{"traditional_seconds", round3(elapsed)}};
  write_json(dir / kMeshReport, j);
}

namespace {

void write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& done) {
  std::ofstream out(dir / "MANIFEST");
  for (const auto& s : done) out << "completed " << s << '\n';
  out << "last_stage " << (done.empty() ? "none" : done.back()) << '\n';
}

template <class F>
double run_stage(const char* name, std::vector<std::string>& done, const std::filesystem::path& dir, F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Io, std::string(name) + ": " + e.what());
  }
  done.emplace_back(name);
  write_manifest(dir, done);
  return round3(seconds_since(start));
}

json without_timings(json j) {
  j.erase("timings");
  return j;
}

}  // namespace

void run_pipeline(const PipelineConfig& config) {
  validate(config);
  apply_thread_count(config.threads);
  const auto dir = prepare(config);
  std::vector<std::string> done;
  write_manifest(dir, done);
  json timings;
  if (config.input.empty()) timings["fixture"] = run_stage("fixture", done, dir, [&] { stage_fixture(config); });
  timings["fit"] = run_stage("fit", done, dir, [&] { stage_fit(config); });
  timings["ph"] = run_stage("ph", done, dir, [&] { stage_persistence(config); });
  if (!config.c) timings["thresholds"] = run_stage("thresholds", done, dir, [&] { stage_thresholds(config); });
  timings["generate"] = run_stage("generate", done, dir, [&] { stage_generate(config); });
  timings["slice"] = run_stage("slice", done, dir, [&] { stage_slice(config, "json"); });
  timings["mesh"] = run_stage("mesh", done, dir, [&] { stage_mesh(config); });

  const json fit = read_json(dir / kFitFile);
  const json slice = read_json(dir / kSliceFile);
  const json mesh = read_json(dir / kMeshReport);
  json report;
  report["seed"] = config.seed;
  report["config"] = config_json(config);
  report["fit"] = without_timings(fit);
  report["fit"].erase("residual_history");
  report["converged"] = fit.at("converged");
  if (std::filesystem::exists(dir / kThicknessFile) && !config.c) {
    const json th = read_json(dir / kThicknessFile);
    report["thresholds"] = th.at("thresholds");
    report["sweep"] = th.at("sweep");
    report["warnings"] = th.at("warnings");
    report["notes"] = th.at("notes");
  }
  report["structure"] = read_json(dir / kStructureFile);
  report["slicing"] = without_timings(slice);
  report["mesh"] = without_timings(mesh);
  const double t_direct = slice.at("timings").at("direct_seconds").get<double>();
  const double t_trad = mesh.at("timings").at("traditional_seconds").get<double>();
  timings["fit_seconds"] = fit.at("timings").at("fit_seconds");
  timings["t_direct"] = t_direct;
  timings["t_traditional"] = t_trad;
  timings["ratio"] = t_direct > 0.0 ? round3(t_trad / t_direct) : 0.0;
  report["timings"] = timings;
  write_json(dir / "report.json", report);
}

BenchRow benchmark_slicing(const std::string& model, const SheetStructure& structure, std::size_t resolution) {
  const auto& box = structure.field.domain();
  const double h = (box.max.z - box.min.z) / static_cast<double>(resolution);
  const auto heights = layer_heights(box.min.z, box.max.z, h);
  BenchRow row;
  row.model = model;
  row.resolution = resolution;
  row.layers = heights.size();

  auto start = std::chrono::steady_clock::now();
  std::vector<Layer> direct(heights.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < static_cast<long long>(heights.size()); ++i)
    direct[static_cast<std::size_t>(i)] = slice_layer(structure, heights[static_cast<std::size_t>(i)], {resolution, resolution});
  row.t_direct = seconds_since(start);

  start = std::chrono::steady_clock::now();
  const TriangleMesh mesh = extract_mesh(structure, cube(resolution));
  const auto traditional = mesh_slice_all(mesh, heights);
  row.t_traditional = seconds_since(start);
  return row;
}

std::vector<BenchRow> benchmark(const PipelineConfig& config) {
  validate(config);
  apply_thread_count(config.threads);
  const auto dir = prepare(config);
  std::vector<BenchRow> rows;
  for (const auto& model : config.bench_models) {
    const TpmsSurface surface = parse_surface(model);
    const FittedModel m = fit_cloud(generate_fixture(fixture_options(config, surface)), config.dudf_res, fit_options(config));
    double c = 0.0;
    if (config.c) {
      c = *config.c;
    } else {
      const TopologyAnalysis a = analyze_diagram(field_persistence(m.fit.field, config.resample_res));
      ChooseOptions opts;
      opts.v0 = config.v0;
      opts.c_e = config.c_e;
      opts.resolution = cube(config.volume_res);
      c = choose_thickness(m.fit.field, m.cloud_bounds, a.thresholds, opts).c;
    }
    const SheetStructure s(m.fit.field, c, m.cloud_bounds);
    for (auto res : config.bench_resolutions) rows.push_back(benchmark_slicing(surface_name(surface), s, res));
  }
  std::ofstream out(dir / "bench.csv");
  if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / "bench.csv").string());
  out << bench_csv(rows);
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string s = "model,resolution,layers,t_direct,t_traditional,ratio\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.3f,%.3f,%.3f\n", r.model.c_str(), r.resolution, r.layers, r.t_direct,
                  r.t_traditional, r.ratio());
    s += buf;
  }
  return s;
}

}  // namespace sheetgen
