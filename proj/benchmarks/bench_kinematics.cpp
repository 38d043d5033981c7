#include <benchmark/benchmark.h>

#include <random>

#include "deltakit/kinematics.hpp"

using namespace deltakit;

namespace {

DeltaParams params() { return derive_radii(64.0, 40.0, 27.0, 12.4); }

std::vector<PlatformPose> poses(std::size_t n) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PlatformPose> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = 27.5 * std::sqrt(u(rng));
    const double phi = 2.0 * M_PI * u(rng);
    out.emplace_back(r * std::cos(phi), r * std::sin(phi), (u(rng) - 0.5) * 60.0);
  }
  return out;
}

}  // namespace

static void BM_InverseKinematics(benchmark::State& state) {
  const DeltaParams p = params();
  const auto set = poses(256);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_kinematics(p, set[i++ & 255]));
  }
}
BENCHMARK(BM_InverseKinematics);

static void BM_ForwardKinematics(benchmark::State& state) {
  const DeltaParams p = params();
  const auto set = poses(256);
  std::vector<JointPositions> joints;
  for (const auto& pose : set) joints.push_back(inverse_kinematics(p, pose));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_kinematics(p, joints[i++ & 255]));
  }
}
BENCHMARK(BM_ForwardKinematics);

static void BM_Jacobian(benchmark::State& state) {
  const DeltaParams p = params();
  const auto set = poses(256);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobian(p, set[i++ & 255]));
  }
}
BENCHMARK(BM_Jacobian);

static void BM_FullChainFk(benchmark::State& state) {
  const DeltaParams p = params();
  ArmConfig arm;
  arm.d1 = 25.0;
  arm.d2 = 40.0;
  arm.roll_angle = 0.3;
  arm.tilt_angle = -0.8;
  const JointPositions q = inverse_kinematics(p, {5.0, -5.0, 10.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(full_chain_fk(p, q, arm));
  }
}
BENCHMARK(BM_FullChainFk);
