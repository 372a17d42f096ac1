#include <benchmark/benchmark.h>

#include "roughstart/littlewood_paley.hpp"
#include "roughstart/quadrature.hpp"
#include "roughstart/solver.hpp"
#include "roughstart/stochastic_objects.hpp"

using namespace roughstart;

namespace {

Exec policy(const benchmark::State& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

SpectralField sample(int N) {
  GaussianICSpec s;
  s.N = N;
  s.theta = 0.5;
  s.seed = 1;
  return sample_ic(s, 0).field;
}

void BM_BlockSups(benchmark::State& state) {
  const auto f = sample(static_cast<int>(state.range(0)));
  const DyadicPartition P(f.lattice());
  const Exec exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(block_sups(f, P, exec));
}

void BM_Duhamel(benchmark::State& state) {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const auto f = sample(static_cast<int>(state.range(0)));
  const auto obj = build_objects(f, spec, TimeGrid::graded(0.01, 1e-7, 40));
  const LinearOperator op(spec, f.lattice());
  const Exec exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(duhamel(op, obj.eta1, exec));
}

void BM_ApplyV(benchmark::State& state) {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const auto f = sample(static_cast<int>(state.range(0)));
  const auto obj = build_objects(f, spec, TimeGrid::graded(0.01, 1e-7, 40));
  const Exec exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(apply_V(spec, obj.eta0, obj.eta0, exec));
}

void BM_SolveFix1(benchmark::State& state) {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const auto u0 = SpectralField::sine(TorusLattice(1, static_cast<int>(state.range(0))), {1, 0});
  PicardConfig c;
  c.T = 0.05;
  const Exec exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(solve_fix1(spec, u0, c, exec));
}

}  // namespace

BENCHMARK(BM_BlockSups)->ArgsProduct({{256, 1024}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Duhamel)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ApplyV)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveFix1)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
