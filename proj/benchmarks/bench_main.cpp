#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "slp/evaluation.hpp"
#include "slp/model.hpp"
#include "slp/personality.hpp"
#include "slp/synthgen.hpp"
#include "slp/trainer.hpp"

namespace {

using namespace slp;

struct Problem {
  SynthData data;
  PersonalityScores scores;
};

const Problem& problem(std::size_t n) {
  static std::vector<std::pair<std::size_t, Problem>> cache;
  for (const auto& [size, p] : cache)
    if (size == n) return p;
  SynthConfig cfg;
  cfg.n = n;
  auto data = generate(cfg);
  auto scores = scores_from_ratings(data.ratings);
  cache.emplace_back(n, Problem{std::move(data), std::move(scores)});
  return cache.back().second;
}

void BM_Objective(benchmark::State& state) {
  const auto& p = problem(static_cast<std::size_t>(state.range(0)));
  Hyperparams h;
  h.dim = static_cast<std::size_t>(state.range(1));
  const SlpObjective objective(p.data.graph, p.scores, h, MarginRule{});
  const auto model = init_model(p.data.graph.n(), h.dim, 1);
  for (auto _ : state) benchmark::DoNotOptimize(objective.evaluate(model).value());
}
BENCHMARK(BM_Objective)->Args({300, 10})->Args({300, 100})->Args({1000, 10});

void BM_Gradient(benchmark::State& state) {
  const auto& p = problem(static_cast<std::size_t>(state.range(0)));
  Hyperparams h;
  h.dim = static_cast<std::size_t>(state.range(1));
  const SlpObjective objective(p.data.graph, p.scores, h, MarginRule{});
  const auto model = init_model(p.data.graph.n(), h.dim, 1);
  const auto active = objective.evaluate(model).active;
  for (auto _ : state) benchmark::DoNotOptimize(objective.gradient(model, active).users.data());
}
BENCHMARK(BM_Gradient)->Args({300, 10})->Args({300, 100})->Args({1000, 10});

void BM_TrainTenIterations(benchmark::State& state) {
  const auto& p = problem(300);
  Hyperparams h;
  h.dim = 10;
  h.lr_u = h.lr_v = 0.1;
  h.max_iter = 10;
  h.tol = 1e-300;
  for (auto _ : state) benchmark::DoNotOptimize(train(p.data.graph, p.scores, h, MarginRule{}).report.iterations);
}
BENCHMARK(BM_TrainTenIterations)->Unit(benchmark::kMillisecond);

void BM_Auc(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  std::vector<ScoredLabel> xs(static_cast<std::size_t>(state.range(0)));
  for (auto& x : xs) x = {gauss(rng), rng() % 2 ? Sign::positive : Sign::negative};
  for (auto _ : state) benchmark::DoNotOptimize(auc(xs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Auc)->RangeMultiplier(10)->Range(100, 100000)->Complexity(benchmark::oNLogN);

void BM_Generate(benchmark::State& state) {
  SynthConfig cfg;
  cfg.n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate(cfg).graph.edge_count());
}
BENCHMARK(BM_Generate)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ScoresFromRatings(benchmark::State& state) {
  const auto& p = problem(1000);
  for (auto _ : state) benchmark::DoNotOptimize(scores_from_ratings(p.data.ratings).optimism.data());
}
BENCHMARK(BM_ScoresFromRatings);

}  // namespace

BENCHMARK_MAIN();
