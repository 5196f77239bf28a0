#include "slp/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "parallel.hpp"
#include "slp/errors.hpp"

namespace slp {

namespace {

constexpr std::uint64_t kRatingSalt = 0x72617465ULL;
constexpr int kRatingThreshold = 3;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void SynthConfig::validate() const {
  if (n < 2) throw ValidationError("synthetic network needs at least 2 users");
  if (!is_probability(frac_strong)) throw ValidationError("frac_strong must lie in [0, 1]");
  if (!is_probability(noise)) throw ValidationError("noise must lie in [0, 1]");
  if (!(edge_density > 0.0 && edge_density <= 1.0)) {
    throw ValidationError("edge_density must lie in (0, 1]");
  }
  if (!(pos_boost >= 1.0) || !(neg_boost >= 1.0)) throw ValidationError("boosts must be >= 1");
  if (d_true < 1) throw ValidationError("d_true must be >= 1");
  if (ratings_per_side < 1 || items_per_side < ratings_per_side) {
    throw ValidationError("need 1 <= ratings_per_side <= items_per_side");
  }
  if (!std::isfinite(sign_bias) || !std::isfinite(latent_scale)) {
    throw ValidationError("sign model parameters must be finite");
  }
}

SynthData generate(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  // (1) planted personalities
  SynthData data;
  data.truth = PersonalityScores(n);
  data.strong.assign(n, false);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_strong = static_cast<std::size_t>(std::llround(cfg.frac_strong * static_cast<double>(n)));
  for (std::size_t k = 0; k < n_strong; ++k) data.strong[order[k]] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (data.strong[i]) {
      const bool optimist = unit(rng) < 0.5;
      const double dominant = uniform(kHighTraitCutoff, 1.0);
      const double other = uniform(0.35, 0.5);
      data.truth.optimism[i] = optimist ? dominant : other;
      data.truth.pessimism[i] = optimist ? other : dominant;
    } else {
      data.truth.optimism[i] = uniform(0.0, 0.2);
      data.truth.pessimism[i] = uniform(0.0, 0.2);
    }
  }

  // (2) planted rank-d_true sign propensities
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t d = cfg.d_true;
  std::vector<double> z(n * d);
  std::vector<double> b(d * d);
  for (auto& v : z) v = gauss(rng);
  for (auto& v : b) v = gauss(rng);
  std::vector<double> zb(n * d, 0.0);  // rows z_i B
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t r = 0; r < d; ++r) zb[i * d + c] += z[i * d + r] * b[r * d + c];

  // (3) boosted positive and negative rates, rescaled to the target density
  auto high_o = [&](std::size_t i) { return data.truth.optimism[i] >= kHighTraitCutoff; };
  auto high_p = [&](std::size_t i) { return data.truth.pessimism[i] >= kHighTraitCutoff; };
  std::vector<double> pos_rate(n * n, 0.0);
  std::vector<double> neg_rate(n * n, 0.0);
  double total_rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += zb[i * d + c] * z[j * d + c];
      const double q = sigmoid(cfg.latent_scale * s / static_cast<double>(d) + cfg.sign_bias);
      const double up = std::pow(cfg.pos_boost, static_cast<int>(high_o(i)) + static_cast<int>(high_o(j)));
      const double down = std::pow(cfg.neg_boost, static_cast<int>(high_p(i)) + static_cast<int>(high_p(j)));
      pos_rate[i * n + j] = q * up;
      neg_rate[i * n + j] = (1.0 - q) * down;
      total_rate += pos_rate[i * n + j] + neg_rate[i * n + j];
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  const double scale = cfg.edge_density * pairs / total_rate;

  // (4) realize links; two draws per ordered pair regardless of outcome so
  // that runs differing only in boosts share their random numbers
  std::vector<SignedEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double u_link = unit(rng);
      const double u_flip = unit(rng);
      double p_pos = scale * pos_rate[i * n + j];
      double p_neg = scale * neg_rate[i * n + j];
      if (p_pos + p_neg > 1.0) {
        const double shrink = 1.0 / (p_pos + p_neg);
        p_pos *= shrink;
        p_neg *= shrink;
      }
      if (u_link >= p_pos + p_neg) continue;
      bool positive = u_link < p_pos;
      if (u_flip < cfg.noise) positive = !positive;
      edges.push_back({i, j, positive ? Sign::positive : Sign::negative});
    }
  }
  data.graph = SignedGraph(n, std::move(edges));

  // (5) ratings reproducing the planted scores
  std::mt19937_64 rating_rng(detail::mix_seed(cfg.seed, kRatingSalt));
  const std::size_t per_side = cfg.ratings_per_side;
  const std::size_t side = cfg.items_per_side;
  std::vector<std::size_t> low_items(side);
  std::vector<std::size_t> high_items(side);
  std::iota(low_items.begin(), low_items.end(), std::size_t{0});
  std::iota(high_items.begin(), high_items.end(), side);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Rating> ratings;
  ratings.reserve(n * 2 * per_side);
  for (std::size_t i = 0; i < n; ++i) {
    std::shuffle(low_items.begin(), low_items.end(), rating_rng);
    std::shuffle(high_items.begin(), high_items.end(), rating_rng);
    const auto high_on_low = static_cast<std::size_t>(
        std::llround(data.truth.optimism[i] * static_cast<double>(per_side)));
    const auto low_on_high = static_cast<std::size_t>(
        std::llround(data.truth.pessimism[i] * static_cast<double>(per_side)));
    for (std::size_t k = 0; k < per_side; ++k) {
      const int on_low = k < high_on_low ? 4 : 1 + coin(rating_rng);   // high: 4, low: 1-2
      const int on_high = k < low_on_high ? 2 + coin(rating_rng) : 4 + coin(rating_rng);
      ratings.push_back({i, low_items[k], on_low});
      ratings.push_back({i, high_items[k], on_high});
    }
  }
  data.ratings = RatingsTable(n, 2 * side, std::move(ratings));

  const auto& means = data.ratings.item_means();
  for (std::size_t k = 0; k < 2 * side; ++k) {
    if (!means[k]) continue;
    const bool meant_low = k < side;
    if (meant_low != (*means[k] <= kRatingThreshold)) {
      throw ValidationError("rating emission infeasible: item " + std::to_string(k) +
                            " mean crossed the threshold; lower frac_strong or raise items_per_side");
    }
  }
  return data;
}

}  // namespace slp
