// Serial references vs the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <vector>

#include "bcsdn/simnet/simnet.hpp"
#include "bcsdn/sweep.hpp"

namespace ec = bcsdn::economics;
namespace sn = bcsdn::simnet;

namespace {

std::vector<double> fine_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = 0.01 + 0.98 * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

ec::EconParams base() {
  ec::EconParams q;
  q.p = 0.5;
  q.epsilon = 0.5;
  q.alpha = 0.5;
  q.beta = 10.0;
  return q;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto grid = fine_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(ec::sweep_serial(base(), ec::SweepVariable::epsilon, grid, ec::Mechanism::contract));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Sweep(benchmark::State& state) {
  const auto grid = fine_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(ec::sweep(base(), ec::SweepVariable::epsilon, grid, ec::Mechanism::contract));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<sn::SimScenario> scenarios(std::size_t n) {
  std::vector<sn::SimScenario> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(sn::make_random_scenario(i, static_cast<sn::Adversary>(i % 4), 40));
  return out;
}

void BM_RunBatchSerial(benchmark::State& state) {
  const auto sc = scenarios(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sn::run_batch_serial(sc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RunBatch(benchmark::State& state) {
  const auto sc = scenarios(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sn::run_batch(sc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_Sweep)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_RunBatchSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunBatch)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
