#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "sheetgen/distance_field.hpp"
#include "sheetgen/kdtree.hpp"
#include "sheetgen/lspia.hpp"
#include "sheetgen/mesh.hpp"
#include "sheetgen/persistence.hpp"
#include "sheetgen/slicing.hpp"
#include "sheetgen/tpms.hpp"

using namespace sheetgen;

namespace {

const Aabb kUnit{{0, 0, 0}, {1, 1, 1}};

// Sampled gyroid-like sheet distance proxy on a res^3 grid.
ScalarGrid sheet_grid(std::size_t res) {
  ScalarGrid g = ScalarGrid::spanning(kUnit, {res, res, res});
  auto v = g.values();
  for (std::size_t l = 0; l < v.size(); ++l) {
    const Vec3 q = 4.0 * 3.141592653589793 * g.position(l);
    v[l] = std::abs(tpms_value(TpmsSurface::G, q)) / 10.0;
  }
  return g;
}

const BSplineField& sheet_field() {
  static const BSplineField f = [] {
    FitOptions opt;
    opt.control_dims = {32, 32, 32};
    return lspia_fit(sheet_grid(48), opt).field;
  }();
  return f;
}

void BM_KdTreeBuild(benchmark::State& state) {
  FixtureOptions opt;
  opt.samples = static_cast<std::size_t>(state.range(0));
  const PointCloud cloud = generate_fixture(opt);
  for (auto _ : state) benchmark::DoNotOptimize(KdTree(cloud).size());
}
BENCHMARK(BM_KdTreeBuild)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Dudf(benchmark::State& state) {
  FixtureOptions opt;
  opt.samples = 10000;
  const PointCloud cloud = generate_fixture(opt);
  const auto res = static_cast<std::size_t>(state.range(0));
  const auto index = build_index(cloud);
  for (auto _ : state) benchmark::DoNotOptimize(compute_dudf(index, kUnit, {res, res, res}).size());
}
BENCHMARK(BM_Dudf)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LspiaFit(benchmark::State& state) {
  const ScalarGrid g = sheet_grid(static_cast<std::size_t>(state.range(0)));
  FitOptions opt;
  opt.control_dims = {32, 32, 32};
  opt.max_iterations = 10;
  for (auto _ : state) benchmark::DoNotOptimize(lspia_fit(g, opt).report.iterations);
}
BENCHMARK(BM_LspiaFit)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_Resample(benchmark::State& state) {
  const auto res = static_cast<std::size_t>(state.range(0));
  const BSplineField& field = sheet_field();
  for (auto _ : state) benchmark::DoNotOptimize(resample(field, {res, res, res}).size());
}
BENCHMARK(BM_Resample)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Persistence(benchmark::State& state) {
  const ScalarGrid g = resample(sheet_field(), {static_cast<std::size_t>(state.range(0)),
                                                static_cast<std::size_t>(state.range(0)),
                                                static_cast<std::size_t>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(compute_persistence(build_complex(g)).total_count());
}
BENCHMARK(BM_Persistence)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SliceLayer(benchmark::State& state) {
  const SheetStructure s(sheet_field(), 0.02);
  const auto res = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(slice_layer(s, 0.37, {res, res}).contours.size());
}
BENCHMARK(BM_SliceLayer)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_ExtractMesh(benchmark::State& state) {
  const SheetStructure s(sheet_field(), 0.02);
  const auto res = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(extract_mesh(s, {res, res, res}).triangles.size());
}
BENCHMARK(BM_ExtractMesh)->Arg(64)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MeshSlice(benchmark::State& state) {
  const TriangleMesh mesh = extract_mesh(SheetStructure(sheet_field(), 0.02), {100, 100, 100});
  const auto heights = layer_heights(0.0, 1.0, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(mesh_slice_all(mesh, heights).size());
}
BENCHMARK(BM_MeshSlice)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
