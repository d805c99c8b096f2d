#include <benchmark/benchmark.h>

#include "nanotalbot/forces.hpp"
#include "nanotalbot/fringe_fit.hpp"
#include "nanotalbot/phase_space.hpp"
#include "nanotalbot/sensitivity.hpp"
#include "nanotalbot/wave_oracle.hpp"

using namespace nanotalbot;

namespace {

const SphereSpec sphere{6.5e-9, 2300.0, 2.0};
const TrapSpec trap{2 * constants::pi * 100, 0.0};
const GratingSpec grating{0.25e-6, 55e3, 1e-6};

double talbot() { return derive(sphere, trap, grating).talbot_time; }

void BM_Pipeline(benchmark::State& state) {
  PipelineRequest r{sphere, trap, grating, talbot(), talbot()};
  r.grid_points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_pipeline(r));
}
BENCHMARK(BM_Pipeline)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_PipelineAndFit(benchmark::State& state) {
  const PipelineRequest r{sphere, trap, grating, talbot(), talbot()};
  for (auto _ : state)
    benchmark::DoNotOptimize(extract_phase(simulate_pipeline(r), 2 * grating.period));
}
BENCHMARK(BM_PipelineAndFit)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const OracleRequest r{sphere, trap, grating, talbot(), talbot(), 0.0, 0.0, {}};
  for (auto _ : state) benchmark::DoNotOptimize(oracle_fringe(r));
}
BENCHMARK(BM_Oracle)->Unit(benchmark::kMillisecond);

void BM_YukawaBox(benchmark::State& state) {
  const YukawaParams yk{1.0, static_cast<double>(state.range(0)) * 1e-6};
  const Box box{10e-6, 110e-6, -20e-6, 20e-6, -0.75, 0.75};
  for (auto _ : state)
    benchmark::DoNotOptimize(yukawa_accel_box(box, materials::gold_density, yk, {0, 0, 0}));
}
BENCHMARK(BM_YukawaBox)->Arg(1)->Arg(5)->Arg(25)->Unit(benchmark::kMicrosecond);

void BM_ExclusionPoint(benchmark::State& state) {
  ExclusionScenario s;
  s.sphere = sphere;
  s.trap = trap;
  s.grating = grating;
  s.wall = WallGeometry::gold_silicon(10e-6);
  s.phase_resolution = constants::pi / 300;
  for (auto _ : state) benchmark::DoNotOptimize(exclusion_curve(s, {5e-6}));
}
BENCHMARK(BM_ExclusionPoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
