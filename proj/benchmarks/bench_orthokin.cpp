#include <benchmark/benchmark.h>

#include <random>

#include "orthokin/classification.hpp"
#include "orthokin/kinematics.hpp"
#include "orthokin/oracle.hpp"
#include "orthokin/singularity.hpp"

using namespace orthokin;

namespace {

const DhParams kFourCusp{1, 2, 1.5, 1};

std::vector<JointConfig> random_configs(int n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ang(-3.14, 3.14);
  std::vector<JointConfig> v(n);
  for (auto& q : v) q = {ang(rng), ang(rng), ang(rng)};
  return v;
}

void BM_ForwardKinematics(benchmark::State& state) {
  const auto qs = random_configs(1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(forward_kinematics(kFourCusp, qs[i++ & 1023]));
}
BENCHMARK(BM_ForwardKinematics);

void BM_SolveIk(benchmark::State& state) {
  const auto qs = random_configs(1024);
  std::vector<CartesianPoint> targets;
  for (const auto& q : qs) targets.push_back(forward_kinematics(kFourCusp, q));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_ik(kFourCusp, targets[i++ & 1023]));
}
BENCHMARK(BM_SolveIk);

void BM_QuarticRealRoots(benchmark::State& state) {
  const auto q = ik_quartic(kFourCusp, {2.5, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(quartic_real_roots(q.coeffs));
}
BENCHMARK(BM_QuarticRealRoots);

void BM_ClassifyDomain(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(classify_domain(kFourCusp));
}
BENCHMARK(BM_ClassifyDomain);

void BM_TraceCurves(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace_singularity_curves(kFourCusp, n));
}
BENCHMARK(BM_TraceCurves)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_FindCusps(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_cusps(kFourCusp, n));
}
BENCHMARK(BM_FindCusps)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_IkCountBrute(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ik_count_brute(kFourCusp, {2.5, 0.0, 0.0}, GridSpec{128}));
}
BENCHMARK(BM_IkCountBrute)->Unit(benchmark::kMillisecond);

void BM_CuspBrute(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cusp_brute(kFourCusp, GridSpec{n}));
}
BENCHMARK(BM_CuspBrute)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_EmpiricalDomain(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(empirical_domain(kFourCusp));
}
BENCHMARK(BM_EmpiricalDomain)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
