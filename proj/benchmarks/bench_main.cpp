#include "ratebench/bbv.hpp"
#include "ratebench/metrics.hpp"
#include "ratebench/perf_series.hpp"
#include "ratebench/plot.hpp"
#include "ratebench/scheduler.hpp"
#include "ratebench/validator.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>

using namespace ratebench;

namespace {

BBVTrace random_trace(std::size_t t, std::uint64_t blocks, std::size_t per_interval) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint64_t> id(0, blocks - 1);
  std::uniform_int_distribution<int> weight(1, 1000);
  BBVTrace trace;
  for (std::size_t i = 0; i < t; ++i) {
    std::map<std::uint64_t, double> m;
    for (std::size_t k = 0; k < per_interval; ++k) m[id(rng)] += weight(rng);
    BBVector v;
    v.entries.assign(m.begin(), m.end());
    trace.intervals.push_back(std::move(v));
  }
  return normalize_l1(trace);
}

void BM_DistanceMatrix(benchmark::State& state) {
  const auto trace = random_trace(static_cast<std::size_t>(state.range(0)), 20'000, 200);
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix(trace, threads));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DistanceMatrix)->Args({100, 1})->Args({200, 1})->Args({500, 1})->Args({500, 4})
    ->Unit(benchmark::kMillisecond);

void BM_RecurrencePgm(benchmark::State& state) {
  const auto d = distance_matrix(random_trace(static_cast<std::size_t>(state.range(0)), 5'000, 50));
  for (auto _ : state) benchmark::DoNotOptimize(recurrence_pgm(d));
}
BENCHMARK(BM_RecurrencePgm)->Arg(200)->Arg(500);

void BM_MakeRrrSchedule(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(make_rrr_schedule(n, m, {5, 1}));
}
BENCHMARK(BM_MakeRrrSchedule)->Args({14, 64})->Args({52, 256});

void BM_CopyStats(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::lognormal_distribution<double> d(0, 1);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(copy_stats(v));
}
BENCHMARK(BM_CopyStats)->Arg(64)->Arg(1024);

void BM_Resample(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> step(1, 20'000'000);
  std::vector<CounterSample> s(1);
  s[0].slots = CounterSample::Slots{};
  for (int i = 0; i < state.range(0); ++i) {
    CounterSample c = s.back();
    const auto dc = step(rng);
    c.instructions += step(rng);
    c.cycles += dc;
    c.slots->total += 4 * dc;
    c.slots->retiring += dc;
    c.slots->frontend += dc / 2;
    c.slots->badspec += dc / 8;
    s.push_back(c);
  }
  for (auto _ : state) benchmark::DoNotOptimize(resample_to_instructions(s, 10'000'000));
}
BENCHMARK(BM_Resample)->Arg(1'000)->Arg(10'000);

void BM_CompareText(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += "value " + std::to_string(i * 1.25) + " " + std::to_string(i) + "\n";
  ToleranceRule rule;
  rule.mode = ToleranceMode::numeric;
  rule.reltol = 1e-6;
  for (auto _ : state) {
    std::vector<Mismatch> out;
    compare_text(text, text, rule, "f", out);
    benchmark::DoNotOptimize(out);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_CompareText)->Arg(10'000);

}  // namespace
BENCHMARK_MAIN();
