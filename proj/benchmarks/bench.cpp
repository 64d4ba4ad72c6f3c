#include <benchmark/benchmark.h>

#include "expfunc/bernstein.hpp"
#include "expfunc/bernstein_gamma.hpp"
#include "expfunc/inversion.hpp"
#include "expfunc/montecarlo.hpp"

using namespace expfunc;

namespace {

const BernsteinSpec& stable_half() {
  static const BernsteinSpec spec(0.0, 0.0, StableJumps{1.0, 0.5});
  return spec;
}

const BernsteinSpec& gamma_sub() {
  static const BernsteinSpec spec(0.0, 0.0, GammaJumps{1.0, 1.0});
  return spec;
}

const BernsteinSpec& atoms() {
  static const BernsteinSpec spec(0.0, 0.0, AtomJumps{{{1.0, 1.0}}});
  return spec;
}

void BM_phi_eval(benchmark::State& state) {
  const auto& spec = gamma_sub();
  Complex z{2.0, 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(phi(spec, z));
}
BENCHMARK(BM_phi_eval);

void BM_log_mellin(benchmark::State& state) {
  const auto& spec = stable_half();
  Complex z{2.0, 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(log_mellin(spec, z));
}
BENCHMARK(BM_log_mellin);

void BM_mellin_line_sweep(benchmark::State& state) {
  const auto& spec = stable_half();
  for (auto _ : state) {
    MellinEvaluator ev(spec, 2.0);
    Complex acc{};
    for (int i = 0; i <= 200; ++i) acc += ev.log_mellin_at(0.1 * i);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_mellin_line_sweep);

void BM_density_deriv(benchmark::State& state) {
  const auto& spec = stable_half();
  for (auto _ : state)
    benchmark::DoNotOptimize(density_deriv(spec, 2.0, 0, 1e-8));
}
BENCHMARK(BM_density_deriv);

void BM_sample_batch(benchmark::State& state) {
  const auto& spec = atoms();
  SimConfig cfg;
  cfg.sample_count = state.range(0);
  cfg.seed = 42;
  for (auto _ : state) benchmark::DoNotOptimize(sample_batch(spec, cfg));
}
BENCHMARK(BM_sample_batch)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
