#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "vmi/coupling.hpp"
#include "vmi/generator.hpp"
#include "vmi/simulator.hpp"

using namespace vmi;

namespace {

InterfaceConfig random_window(std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(0.5);
  std::string bits(width, '0');
  for (auto& c : bits) c = bit(rng) ? '1' : '0';
  return InterfaceConfig::from_bits(0, bits);
}

RateKernel power_law_q(Displacement range) { return materialize(PowerLaw{1.0, 4.0, range}); }
const RateKernel kSwap({{1, 0.25}, {-1, 0.25}}, true);

void BM_Fcd(benchmark::State& state) {
  const auto x = random_window(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(f_cd(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fcd)->RangeMultiplier(4)->Range(16, 16384)->Complexity(benchmark::oN);

void BM_InterfaceCounts(benchmark::State& state) {
  const auto x = random_window(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(interface_counts(x, 3));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InterfaceCounts)->RangeMultiplier(4)->Range(16, 16384)->Complexity(benchmark::oN);

void BM_EnumerateTransitions(benchmark::State& state) {
  const auto x = random_window(static_cast<std::size_t>(state.range(0)), 3);
  const RateKernel q = power_law_q(6);
  const TruncationSpec trunc{6};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_transitions(x, q, kSwap, trunc));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EnumerateTransitions)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oN);

void BM_GfcdClosedForm(benchmark::State& state) {
  const auto x = random_window(256, 4);
  const RateKernel q = power_law_q(state.range(0));
  const TruncationSpec trunc{state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(gfcd_closed_form(x, q, kSwap, trunc));
}
BENCHMARK(BM_GfcdClosedForm)->Arg(1)->Arg(6)->Arg(50);

// Events per second of the direct method, including the O(K) count update.
void BM_SimulatorStep(benchmark::State& state) {
  const Displacement k = state.range(0);
  const RateKernel q = power_law_q(k);
  InterfaceProcess proc(random_window(64, 5), q, kSwap, {k}, k);
  CounterStream rng(5, 0, clock_id::kInterface);
  for (auto _ : state) benchmark::DoNotOptimize(step(proc, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatorStep)->Arg(1)->Arg(6)->Arg(50);

void BM_RunTrajectory(benchmark::State& state) {
  SimulationConfig c;
  c.q = power_law_q(6);
  c.p = kSwap;
  c.truncation = {6};
  c.nmax = 6;
  c.t_max = static_cast<double>(state.range(0));
  std::uint64_t events = 0;
  for (auto _ : state) {
    ++c.trajectory;
    events += run(c).events;
  }
  state.counters["events"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_RunTrajectory)->Arg(10)->Arg(100);

void BM_ExtensionEvents(benchmark::State& state) {
  const auto x = random_window(static_cast<std::size_t>(state.range(0)), 6);
  const RateKernel q = power_law_q(6);
  for (auto _ : state) benchmark::DoNotOptimize(extension_events(x, q, kSwap, {6}));
}
BENCHMARK(BM_ExtensionEvents)->Arg(16)->Arg(256);

}  // namespace
BENCHMARK_MAIN();
