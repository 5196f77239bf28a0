#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "slp/errors.hpp"
#include "slp/personality.hpp"
#include "slp/synthgen.hpp"

namespace slp {
namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> positive_in_degree(const SignedGraph& g) {
  std::vector<double> deg(g.n(), 0.0);
  for (const auto& e : g.edges())
    if (e.sign == Sign::positive) deg[e.dst] += 1.0;
  return deg;
}

TEST(SynthTest, FixedSeedIsDeterministic) {
  SynthConfig cfg;
  cfg.n = 80;
  const auto a = generate(cfg);
  const auto b = generate(cfg);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_EQ(a.strong, b.strong);
  ASSERT_EQ(a.ratings.size(), b.ratings.size());
  for (std::size_t k = 0; k < a.ratings.size(); ++k) EXPECT_EQ(a.ratings.ratings()[k].value, b.ratings.ratings()[k].value);
  cfg.seed = 2;
  EXPECT_NE(generate(cfg).graph, a.graph);
}

TEST(SynthTest, DefaultInstanceShape) {
  const auto d = generate(SynthConfig{});
  EXPECT_EQ(d.graph.n(), 300u);
  for (const auto& e : d.graph.edges()) EXPECT_NE(e.src, e.dst);
  const double density = static_cast<double>(d.graph.edge_count()) / (300.0 * 299.0);
  EXPECT_NEAR(density, 0.03, 0.005);
  EXPECT_EQ(std::count(d.strong.begin(), d.strong.end(), true), 90);
  EXPECT_NO_THROW(d.truth.validate());
  EXPECT_GT(d.graph.negative_count(), 0u);
}

TEST(SynthTest, PlantedTraitRanges) {
  const auto d = generate(SynthConfig{});
  for (std::size_t i = 0; i < 300; ++i) {
    const double o = d.truth.optimism[i], p = d.truth.pessimism[i];
    if (d.strong[i]) {
      EXPECT_GE(std::max(o, p), kHighTraitCutoff);
    } else {
      EXPECT_LE(o, 0.2);
      EXPECT_LE(p, 0.2);
    }
  }
}

TEST(SynthTest, NullConstructionDecouplesSignsFromOptimism) {
  double sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.noise = 0.0;
    cfg.pos_boost = cfg.neg_boost = 1.0;
    const auto d = generate(cfg);
    sum += pearson(d.truth.optimism, positive_in_degree(d.graph));
  }
  EXPECT_NEAR(sum / 10.0, 0.0, 0.05);
}

TEST(SynthTest, OptimistsReceiveMorePositiveLinks) {
  double optimist = 0.0, indifferent = 0.0;
  std::size_t n_opt = 0, n_ind = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    const auto d = generate(cfg);
    const auto deg = positive_in_degree(d.graph);
    for (std::size_t i = 0; i < cfg.n; ++i) {
      if (d.truth.optimism[i] >= kHighTraitCutoff) {
        optimist += deg[i];
        ++n_opt;
      } else if (!d.strong[i]) {
        indifferent += deg[i];
        ++n_ind;
      }
    }
  }
  EXPECT_GE((optimist / n_opt) / (indifferent / n_ind), 1.5);
}

TEST(SynthTest, PositiveBoostIsMonotone) {
  double previous = -1.0;
  for (double boost : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SynthConfig cfg;
      cfg.seed = seed;
      cfg.pos_boost = boost;
      const auto d = generate(cfg);
      for (const auto& e : d.graph.edges()) {
        if (e.sign != Sign::positive) continue;
        total += (d.truth.optimism[e.src] >= kHighTraitCutoff) + (d.truth.optimism[e.dst] >= kHighTraitCutoff);
      }
    }
    EXPECT_GE(total, previous) << "pos_boost " << boost;
    previous = total;
  }
}

TEST(SynthTest, RatingScoresRecoverPlantedTraits) {
  std::vector<double> got, want;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    const auto d = generate(cfg);
    const auto s = scores_from_ratings(d.ratings);
    for (std::size_t i = 0; i < cfg.n; ++i) {
      EXPECT_NEAR(s.optimism[i], d.truth.optimism[i], 0.1);
      EXPECT_NEAR(s.pessimism[i], d.truth.pessimism[i], 0.1);
      got.push_back(s.optimism[i]);
      got.push_back(s.pessimism[i]);
      want.push_back(d.truth.optimism[i]);
      want.push_back(d.truth.pessimism[i]);
    }
  }
  EXPECT_GE(pearson(got, want), 0.8);
}

TEST(SynthTest, InvalidConfigsRejected) {
  SynthConfig cfg;
  cfg.edge_density = 0.0;
  EXPECT_THROW(generate(cfg), ValidationError);
  cfg = SynthConfig{};
  cfg.pos_boost = 0.5;
  EXPECT_THROW(generate(cfg), ValidationError);
  cfg = SynthConfig{};
  cfg.noise = 1.5;
  EXPECT_THROW(generate(cfg), ValidationError);
  cfg = SynthConfig{};
  cfg.frac_strong = -0.1;
  EXPECT_THROW(generate(cfg), ValidationError);
  cfg = SynthConfig{};
  cfg.n = 1;
  EXPECT_THROW(generate(cfg), ValidationError);
}

}  // namespace
}  // namespace slp
