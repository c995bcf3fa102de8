#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sheetgen/pipeline.hpp"
#include "support.hpp"

using namespace sheetgen;
using nlohmann::json;

namespace {

PipelineConfig small_config(const std::filesystem::path& out) {
  PipelineConfig c;
  c.out_dir = out;
  c.fixture_samples = 20000;
  c.dudf_res = 40;
  c.control_dims = 24;
  c.resample_res = 48;
  c.volume_res = 32;
  c.slice_res = 48;
  c.mesh_res = 48;
  c.layer_height = 0.05;
  c.threads = 1;
  c.seed = 3;
  return c;
}

json read(const std::filesystem::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json comparable(json report) {
  report.erase("timings");
  report["config"].erase("out_dir");
  return report;
}

}  // namespace

TEST_CASE("configuration validation") {
  PipelineConfig c;
  CHECK_NOTHROW(validate(c));
  auto rejects = [](auto mutate) {
    PipelineConfig bad;
    mutate(bad);
    return testing::error_code_of([&] { validate(bad); }) == ErrorCode::Config;
  };
  CHECK(rejects([](PipelineConfig& b) { b.v0 = 1.5; }));
  CHECK(rejects([](PipelineConfig& b) { b.v0 = 0.0; }));
  CHECK(rejects([](PipelineConfig& b) { b.dudf_res = 7; }));
  CHECK(rejects([](PipelineConfig& b) { b.slice_res = 4; }));
  CHECK(rejects([](PipelineConfig& b) { b.epsilon = 0.0; }));
  CHECK(rejects([](PipelineConfig& b) { b.layer_height = -0.1; }));
  CHECK(rejects([](PipelineConfig& b) { b.c = -0.01; }));
  CHECK(rejects([](PipelineConfig& b) { b.threads = 0; }));
  CHECK(rejects([](PipelineConfig& b) { b.bench_resolutions.clear(); }));
}

TEST_CASE("JSON configuration") {
  PipelineConfig c;
  merge_config_json(c, R"({"dudf_res": 50, "v0": 0.4, "c": 0.01, "fixture_surface": "G", "bench_models": ["P", "D"]})");
  CHECK(c.dudf_res == 50);
  CHECK(c.v0 == 0.4);
  REQUIRE(c.c.has_value());
  CHECK(*c.c == 0.01);
  CHECK(c.fixture_surface == TpmsSurface::G);
  CHECK(c.bench_models.size() == 2);
  CHECK(c.control_dims == 64);

  CHECK(testing::error_code_of([&] { merge_config_json(c, R"({"dudf_resolution": 50})"); }) == ErrorCode::Config);
  CHECK(testing::error_code_of([&] { merge_config_json(c, R"({"v0": "half"})"); }) == ErrorCode::Config);
  CHECK(testing::error_code_of([&] { merge_config_json(c, "{not json"); }) == ErrorCode::Config);

  PipelineConfig back;
  merge_config_json(back, config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));

  testing::TempDir dir("cfg");
  {
    std::ofstream out(dir / "c.json");
    out << R"({"layer_height": 0.02})";
  }
  CHECK(load_config(dir / "c.json").layer_height == 0.02);
}

TEST_CASE("full run writes every artefact and is deterministic") {
  testing::TempDir dir("run");
  const auto a = small_config(dir / "a");
  run_pipeline(a);
  for (const char* name : {"cloud.xyz", "field.bin", "fit.json", "diagram.csv", "diagram.json", "thickness_report.json",
                           "structure.json", "layers.json", "slice.json", "mesh.stl", "mesh.json", "report.json",
                           "MANIFEST"})
    CHECK_MESSAGE(std::filesystem::exists(a.out_dir / name), name);
  const json report = read(a.out_dir / "report.json");
  CHECK(report.at("converged").get<bool>());
  CHECK(report.at("seed").get<int>() == 3);
  CHECK(report.at("structure").at("provenance") == "optimized");
  CHECK(report.at("mesh").at("watertight").get<bool>());
  const double c = report.at("structure").at("c").get<double>();
  CHECK(c >= report.at("thresholds").at("c_min").get<double>());
  CHECK(c < report.at("thresholds").at("c_max_1").get<double>());
  CHECK(report.at("timings").contains("t_direct"));
  CHECK(slurp(a.out_dir / "MANIFEST").find("last_stage mesh") != std::string::npos);

  auto b = small_config(dir / "b");
  run_pipeline(b);
  CHECK(comparable(read(b.out_dir / "report.json")) == comparable(report));

  // Later stages rerun from the artefacts on disk.
  b.layer_height = 0.1;
  stage_slice(b, "svg");
  CHECK(std::filesystem::exists(b.out_dir / "layers_svg" / "layer_0000.svg"));
  stage_slice(b, "json");
  CHECK(read(b.out_dir / "slice.json").at("layers").get<int>() == 10);
}

TEST_CASE("thickness override skips the threshold analysis") {
  testing::TempDir dir("override");
  auto c = small_config(dir.path());
  c.c = 0.01;
  run_pipeline(c);
  const json structure = read(dir / "structure.json");
  CHECK(structure.at("provenance") == "user-override");
  CHECK(structure.at("c").get<double>() == 0.01);
  CHECK_FALSE(std::filesystem::exists(dir / "thickness_report.json"));
  CHECK(slurp(dir / "MANIFEST").find("completed thresholds") == std::string::npos);
}

TEST_CASE("stage errors name the stage and keep the manifest") {
  testing::TempDir dir("fail");
  auto c = small_config(dir.path());
  c.input = dir / "missing.xyz";
  try {
    run_pipeline(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
    CHECK(std::string(e.what()).rfind("fit: ", 0) == 0);
  }
  CHECK(slurp(dir / "MANIFEST").find("last_stage none") != std::string::npos);
}

TEST_CASE("benchmark rows and CSV") {
  testing::TempDir dir("bench");
  auto c = small_config(dir.path());
  c.c = 0.02;
  c.bench_resolutions = {24, 32};
  const auto rows = benchmark(c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].model == "P");
  CHECK(rows[0].resolution == 24);
  CHECK(rows[1].layers == 32);
  const auto csv = slurp(dir / "bench.csv");
  CHECK(csv.rfind("model,resolution,layers,t_direct,t_traditional,ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(bench_csv(rows) == csv);
}
