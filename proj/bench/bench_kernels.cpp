#include <benchmark/benchmark.h>

#include "partlab/kernels.hpp"
#include "partlab/samplers.hpp"

using namespace partlab;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

void crp_histogram(benchmark::State& state) {
  const auto params = ExtParams<double>::two_param(0.5, 0.5);
  for (auto _ : state) {
    auto counts = mc_histogram(
        1 << 16, 7, 20, [&](RngHandle& rng) { return crp_sample(params, 20, rng).k() - 1; }, mode(state));
    benchmark::DoNotOptimize(counts);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void gem_moments(benchmark::State& state) {
  const auto params = ExtParams<double>::two_param(1.0 / 3, 2.0 / 3);
  const DrawVector draw = [&](RngHandle& rng, std::vector<double>& out) {
    const auto w = gem_fractions(params, 4, rng).w;
    for (std::size_t i = 0; i < 4; ++i) out[i] = w[i];
  };
  for (auto _ : state) {
    auto sums = mc_moments(1 << 17, 7, 4, draw, mode(state));
    benchmark::DoNotOptimize(sums);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void exact_total(benchmark::State& state) {
  const auto params = ExtParams<Rational>::two_param(Rational(1, 3), Rational(2, 3));
  for (auto _ : state) {
    Rational total = eppf_total(params, 10, mode(state));
    benchmark::DoNotOptimize(total);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(crp_histogram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(gem_moments)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(exact_total)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
