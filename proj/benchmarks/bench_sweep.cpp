#include <benchmark/benchmark.h>

#include "deltakit/optimizer.hpp"

using namespace deltakit;

static void BM_EvaluateDesign(benchmark::State& state) {
  const DeltaParams p = derive_radii(82.0, 40.0, 27.0, 12.4);
  const WorkspaceSpec spec;
  const ComplianceLaw law = ComplianceLaw::power(3.7, 0.71);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_design(p, spec, law, 1.0));
  }
}
BENCHMARK(BM_EvaluateDesign)->Unit(benchmark::kMillisecond);

static void BM_WorkspaceGci(benchmark::State& state) {
  const DeltaParams p = derive_radii(82.0, 40.0, 27.0, 12.4);
  const WorkspaceSpec spec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gci(p, spec));
  }
}
BENCHMARK(BM_WorkspaceGci)->Unit(benchmark::kMillisecond);

static void BM_SmallSweep(benchmark::State& state) {
  ParameterGrid grid;
  grid.link_length = {76.0, 2.0, 84.0};
  grid.leg_width = {35.0, 5.0, 40.0};
  grid.offset_angle_deg = {25.0, 1.0, 29.0};
  WorkspaceSpec spec;
  spec.step = 10.0;
  const ComplianceLaw law = ComplianceLaw::power(3.7, 0.71);
  SweepOptions options;
  options.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sweep(grid, spec, law, 1.0, {}, {}, options));
  }
}
BENCHMARK(BM_SmallSweep)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
