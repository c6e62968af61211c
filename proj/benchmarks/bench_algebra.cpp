#include <benchmark/benchmark.h>

#include <vector>

#include "merotower/blowup.hpp"
#include "merotower/rational_map.hpp"
#include "merotower/scenarios.hpp"

using namespace merotower;

namespace {

const std::vector<std::string> kNames{"z", "w", "t"};

Poly P(const char* s) { return parse_poly(s, kNames); }

}  // namespace

static void BM_GcdWithCommonFactor(benchmark::State& state) {
  const Poly r = P("z^2 + 3*w*t - t^2");
  const Poly a = P("z^3 - 2*z*w^2 + t^3 + w*t") * r;
  const Poly b = P("w^3 + z*t^2 - 5*z^2*w") * r;
  for (auto _ : state) benchmark::DoNotOptimize(gcd(a, b));
}
BENCHMARK(BM_GcdWithCommonFactor);

static void BM_DegreeSequence(benchmark::State& state) {
  const RationalMap f = guedj_map();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(degree_sequence(f, n));
}
BENCHMARK(BM_DegreeSequence)->Arg(4)->Arg(6)->Arg(8);

static void BM_IndeterminacyLocus(benchmark::State& state) {
  const RationalMap cremona({HomoPoly(P("w*t")), HomoPoly(P("z*t")), HomoPoly(P("z*w"))});
  for (auto _ : state) benchmark::DoNotOptimize(indeterminacy_locus(cremona));
}
BENCHMARK(BM_IndeterminacyLocus);

static void BM_TopologicalDegree(benchmark::State& state) {
  const RationalMap f = guedj_map();
  for (auto _ : state) benchmark::DoNotOptimize(topological_degree(f, 5, 1));
}
BENCHMARK(BM_TopologicalDegree);

static void BM_LiftThroughTwoBlowups(benchmark::State& state) {
  const Atlas a = guedj_double_atlas();
  const RationalMap f = guedj_map();
  for (auto _ : state) benchmark::DoNotOptimize(lift_map_through(a, f));
}
BENCHMARK(BM_LiftThroughTwoBlowups);
