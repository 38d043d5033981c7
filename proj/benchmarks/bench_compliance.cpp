#include <benchmark/benchmark.h>

#include "deltakit/compliance.hpp"

using namespace deltakit;

namespace {
DeltaParams params() { return derive_radii(64.0, 40.0, 27.0, 12.4); }
}  // namespace

static void BM_LinkWrenchSolve(benchmark::State& state) {
  const DeltaParams p = params();
  const PlatformPose pose(6.0, -4.0, 12.0);
  const LinkGeometry geom = link_endpoints(p, pose);
  Wrench w;
  w.force = Vec3(3.0, -2.0, 8.0);
  w.torque = Vec3(500.0, -250.0, 1000.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_link_forces(geom, pose, w));
  }
}
BENCHMARK(BM_LinkWrenchSolve);

static void BM_DeflectionPipeline(benchmark::State& state) {
  const DeltaParams p = params();
  const PlatformPose pose(6.0, -4.0, 12.0);
  const ComplianceLaw law = ComplianceLaw::power(3.7, 0.71);
  Wrench w;
  w.torque = Vec3(0.0, 0.0, 1000.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_deflection(p, pose, law, w));
  }
}
BENCHMARK(BM_DeflectionPipeline);

static void BM_TorsionalCompliance(benchmark::State& state) {
  const DeltaParams p = params();
  const ComplianceLaw law = ComplianceLaw::power(3.7, 0.71);
  const PlatformPose pose(6.0, -4.0, 12.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(torsional_compliance(p, pose, law, 1.0));
  }
}
BENCHMARK(BM_TorsionalCompliance);

static void BM_FitComplianceLaw(benchmark::State& state) {
  std::vector<ForceDeflectionPair> pairs;
  for (int i = 1; i <= 460; ++i) {
    const double f = 0.15 * i;
    pairs.push_back({f, 3.7 * std::pow(f, 0.71)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_compliance_law(pairs));
  }
}
BENCHMARK(BM_FitComplianceLaw);
