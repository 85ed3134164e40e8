#include <benchmark/benchmark.h>

#include <random>

#include "onevar/kripke.hpp"
#include "onevar/model_check.hpp"
#include "onevar/search.hpp"
#include "onevar/syntax.hpp"
#include "onevar/translation.hpp"

using namespace onevar;

namespace {

// Guard construction for p1 under d alternating boxes.
void BM_GuardA(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  const auto d = static_cast<unsigned>(state.range(1));
  std::uint64_t dag = 0;
  for (auto _ : state) {
    FormulaStore store(n);
    Formula f = store.var(1);
    for (unsigned i = 0; i < d; ++i) f = store.box(1 + i % n, f);
    TranslationContext ctx(store, f, default_variant(FactorMode::T));
    dag = store.dag_size(ctx.reduce());
    benchmark::DoNotOptimize(dag);
  }
  state.counters["dag_size"] = static_cast<double>(dag);
}
BENCHMARK(BM_GuardA)->ArgsProduct({{2, 3}, {1, 3, 5, 8}});

// satSet of reduce(φ) on a transferred-size model with random valuation.
void BM_SatSet(benchmark::State& state) {
  FormulaStore store(2);
  const Formula f = parse(store, "[1][2]p1 -> [2][1]p1");
  TranslationContext ctx(store, f, default_variant(FactorMode::T));
  const Formula r = ctx.reduce();
  std::mt19937_64 rng(5);
  const auto side = static_cast<unsigned>(state.range(0));
  std::vector<Edge> edges;
  for (World i = 0; i < side; ++i)
    for (World j = i; j < side; ++j)
      if (i == j || rng() % 3 == 0) edges.push_back({i, j});
  const Frame1 big{Relation(side, edges), {}};
  const NFrame frame = product(std::vector<Frame1>{big, big});
  WorldSet ext(frame.world_count());
  for (World w = 0; w < frame.world_count(); ++w)
    if (rng() & 1U) ext.insert(w);
  Valuation v;
  v.set(0, ext);
  for (auto _ : state) benchmark::DoNotOptimize(sat_set(store, frame, v, r));
  state.SetComplexityN(static_cast<std::int64_t>(frame.world_count()));
}
BENCHMARK(BM_SatSet)->RangeMultiplier(2)->Range(4, 32)->Complexity();

void BM_Search(benchmark::State& state) {
  FormulaStore store(2);
  const Formula f = parse(store, "[1]p1 -> [1][1]p1");
  SearchBudget budget;
  budget.max_worlds_per_factor = static_cast<unsigned>(state.range(0));
  const std::vector<FactorClass> classes{FactorClass::T, FactorClass::T};
  for (auto _ : state) benchmark::DoNotOptimize(search_countermodel(store, f, classes, budget).stats.models);
}
BENCHMARK(BM_Search)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
