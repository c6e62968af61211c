#include <benchmark/benchmark.h>

#include <random>

#include "merotower/scenarios.hpp"
#include "merotower/systems.hpp"

using namespace merotower;

static void BM_GreedyCircle(benchmark::State& state) {
  const auto pts = circle_grid(static_cast<std::size_t>(state.range(0)), 1);
  const System<Complex> c = circle_doubling();
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_separated_set(c, std::span<const Complex>(pts), {6, 0.05}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GreedyCircle)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Complexity();

static void BM_DeltaIdentityTower(benchmark::State& state) {
  const Tower t = identity_tower(RationalMap({HomoPoly(parse_poly("z^2", std::vector<std::string>{"z", "w", "t"})),
                                              HomoPoly(parse_poly("w^2", std::vector<std::string>{"z", "w", "t"})),
                                              HomoPoly(parse_poly("t^2", std::vector<std::string>{"z", "w", "t"}))}),
                                 static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  const TruncatedPoint x = sample_truncated(t, t.depth(), rng), y = sample_truncated(t, t.depth(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(delta(t, x, y));
}
BENCHMARK(BM_DeltaIdentityTower)->Arg(1)->Arg(8)->Arg(32);

static void BM_SigmaResolvedTower(benchmark::State& state) {
  const Tower t = build_guedj_tower();
  const TruncatedPoint x = lift_base_point(t, ProjPoint({0.3, 0.7, 1.0}), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sigma(t, x));
}
BENCHMARK(BM_SigmaResolvedTower);

static void BM_CircleEntropyReport(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(guedj_circle_entropy(static_cast<std::size_t>(state.range(0)), 2, 7, {0.1}, 1));
  }
}
BENCHMARK(BM_CircleEntropyReport)->Arg(1 << 12)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
