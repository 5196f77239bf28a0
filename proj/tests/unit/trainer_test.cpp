#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slp/errors.hpp"
#include "slp/trainer.hpp"

namespace slp {
namespace {

TEST(InitModelTest, SameSeedSameModel) {
  const auto a = init_model(10, 3, 42);
  const auto b = init_model(10, 3, 42);
  EXPECT_EQ(a.users, b.users);
  EXPECT_EQ(a.correlation, b.correlation);
}

TEST(InitModelTest, DifferentSeedsDiffer) {
  const auto a = init_model(2, 2, 1);
  const auto b = init_model(2, 2, 2);
  EXPECT_NE(a.users, b.users);
}

TEST(InitModelTest, EntriesInsideOpenRange) {
  const auto m = init_model(50, 7, 3);
  EXPECT_LT(m.users.cwiseAbs().maxCoeff(), 0.01);
  EXPECT_LT(m.correlation.cwiseAbs().maxCoeff(), 0.01);
  EXPECT_EQ(m.users.rows(), 50);
  EXPECT_EQ(m.correlation.rows(), 7);
}

SignedGraph tiny_graph() {
  return SignedGraph(6, {{0, 1, Sign::positive}, {1, 2, Sign::positive}, {2, 0, Sign::negative},
                         {3, 4, Sign::positive}, {4, 5, Sign::negative}, {5, 3, Sign::positive},
                         {0, 3, Sign::negative}, {2, 5, Sign::positive}});
}

TEST(TrainTest, ReducesReconstructionErrorOnTinyInstance) {
  Hyperparams h;
  h.alpha = h.beta = 0.0;
  h.dim = 2;
  h.lr_u = h.lr_v = 1e-3;
  h.max_iter = 500;
  const auto g = tiny_graph();
  const SlpObjective obj(g, h);
  const auto start = obj.evaluate(init_model(6, 2, h.seed)).parts.reconstruction;
  const auto result = train_mf_baseline(g, h);
  EXPECT_LT(obj.evaluate(result.model).parts.reconstruction, start);
}

TEST(TrainTest, EmptyGraphShrinksTowardZero) {
  Hyperparams h;
  h.dim = 3;
  h.lr_u = h.lr_v = 0.1;
  h.max_iter = 50;
  h.tol = 1e-300;
  const SignedGraph g(5);
  const PersonalityScores s(5);
  const SlpObjective obj(g, s, h, MarginRule{});
  FactorModel m = init_model(5, 3, 4);
  double previous_u = m.users.norm();
  double previous_v = m.correlation.norm();
  for (int step = 0; step < 10; ++step) {
    Hyperparams one = h;
    one.max_iter = 1;
    m = minimize(SlpObjective(g, s, one, MarginRule{}), m).model;
    EXPECT_LT(m.users.norm(), previous_u);
    EXPECT_LT(m.correlation.norm(), previous_v);
    previous_u = m.users.norm();
    previous_v = m.correlation.norm();
  }
  const auto v = obj.evaluate(m);
  EXPECT_EQ(v.parts.reconstruction, 0.0);
  EXPECT_EQ(v.parts.optimism_penalty + v.parts.pessimism_penalty, 0.0);
}

TEST(TrainTest, Deterministic) {
  std::mt19937_64 rng(5);
  const auto g = oracle::random_graph(20, 0.15, rng);
  const auto s = oracle::random_scores(20, rng);
  Hyperparams h;
  h.dim = 3;
  h.lr_u = h.lr_v = 0.01;
  h.max_iter = 40;
  const auto a = train(g, s, h, MarginRule{});
  const auto b = train(g, s, h, MarginRule{});
  EXPECT_EQ(a.report, b.report);
  EXPECT_EQ(a.model.users, b.model.users);
  EXPECT_EQ(a.model.correlation, b.model.correlation);
}

TEST(TrainTest, BaselineEqualsPenaltyOffTrainBitwise) {
  std::mt19937_64 rng(6);
  const auto g = oracle::random_graph(25, 0.15, rng);
  const auto s = oracle::random_scores(25, rng);
  Hyperparams h;
  h.dim = 4;
  h.lr_u = h.lr_v = 0.05;
  h.max_iter = 60;
  const auto mf = train_mf_baseline(g, h);
  h.alpha = h.beta = 0.0;
  const auto slp = train(g, s, h, MarginRule{});
  EXPECT_EQ(mf.report.objective_trace, slp.report.objective_trace);
  EXPECT_EQ(mf.model.users, slp.model.users);
  EXPECT_EQ(mf.model.correlation, slp.model.correlation);
}

TEST(TrainTest, TraceNonIncreasingWithBacktracking) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    const auto g = oracle::random_graph(30, 0.1, rng);
    const auto s = oracle::random_scores(30, rng);
    Hyperparams h;
    h.dim = 4;
    h.lr_u = h.lr_v = 0.5;  // large enough that halving is exercised
    h.max_iter = 80;
    h.seed = rep;
    const auto r = train(g, s, h, MarginRule{});
    ASSERT_EQ(r.report.objective_trace.size(), r.report.iterations + 1);
    for (std::size_t k = 1; k < r.report.objective_trace.size(); ++k)
      EXPECT_LE(r.report.objective_trace[k], r.report.objective_trace[k - 1] + 1e-9);
  }
}

TEST(TrainTest, SmallStepDescendsFrozenObjective) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    const auto g = oracle::random_graph(15, 0.2, rng);
    const auto s = oracle::random_scores(15, rng);
    const auto m = oracle::random_model(15, 3, rng, 0.3);
    const SlpObjective obj(g, s, Hyperparams{}, MarginRule{});
    const auto at = obj.evaluate(m);
    const auto grad = obj.gradient(m, at.active);
    const double norm = std::sqrt(grad.users.squaredNorm() + grad.correlation.squaredNorm());
    if (norm < 1e-12) continue;
    const double lr = 1e-4 / norm;
    const FactorModel step(m.users - lr * grad.users, m.correlation - lr * grad.correlation);
    EXPECT_LT(obj.evaluate_frozen(step, at.active), at.value());
  }
}

TEST(TrainTest, ReportsActiveCountsOfFinalModel) {
  std::mt19937_64 rng(9);
  const auto g = oracle::random_graph(20, 0.15, rng);
  const auto s = oracle::random_scores(20, rng);
  Hyperparams h;
  h.dim = 3;
  h.lr_u = h.lr_v = 0.01;
  h.max_iter = 20;
  const auto r = train(g, s, h, MarginRule{});
  const auto v = SlpObjective(g, s, h, MarginRule{}).evaluate(r.model);
  EXPECT_EQ(r.report.active_optimism, v.active.gamma.size());
  EXPECT_EQ(r.report.active_pessimism, v.active.delta.size());
  EXPECT_EQ(r.report.objective_trace.back(), v.value());
}

TEST(TrainTest, StopsAtMaxIter) {
  Hyperparams h;
  h.dim = 2;
  h.max_iter = 7;
  h.tol = 1e-300;
  const auto r = train_mf_baseline(tiny_graph(), h);
  EXPECT_EQ(r.report.iterations, 7u);
  EXPECT_FALSE(r.report.converged);
}

TEST(TrainTest, ConvergesOnTolerance) {
  Hyperparams h;
  h.dim = 2;
  h.lr_u = h.lr_v = 0.05;
  h.max_iter = 100000;
  h.tol = 1e-3;
  const auto r = train_mf_baseline(tiny_graph(), h);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LT(r.report.iterations, 100000u);
}

TEST(TrainTest, DivergenceRaisesTrainingError) {
  std::mt19937_64 rng(10);
  const auto g = oracle::random_graph(20, 0.3, rng);
  Hyperparams h;
  h.dim = 4;
  h.lr_u = h.lr_v = 1e6;
  h.backtracking = false;
  h.max_iter = 200;
  h.tol = 1e-300;
  EXPECT_THROW(train_mf_baseline(g, h), TrainingError);
}

}  // namespace
}  // namespace slp
