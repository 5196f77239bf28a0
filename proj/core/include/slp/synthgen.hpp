#pragma once

// Synthetic signed networks with planted optimism/pessimism structure and
// matching item ratings, for desk-scale experiments.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slp/graph.hpp"

namespace slp {

struct SynthConfig {
  std::size_t n = 300;
  double frac_strong = 0.3;
  double edge_density = 0.03;  // expected fraction of ordered pairs linked
  double pos_boost = 3.0;      // positive-link odds multiplier per optimistic endpoint
  double neg_boost = 3.0;      // negative-link odds multiplier per pessimistic endpoint
  std::size_t d_true = 4;
  double noise = 0.05;         // sign-flip probability
  std::uint64_t seed = 1;

  double sign_bias = 1.0;      // logit offset of the planted sign model (positives dominate)
  double latent_scale = 2.0;   // logit scale of the planted low-rank term
  std::size_t items_per_side = 40;    // consensus-low items, and as many consensus-high items
  std::size_t ratings_per_side = 10;  // ratings per user on each side

  void validate() const;
};

struct SynthData {
  SignedGraph graph;
  RatingsTable ratings;
  PersonalityScores truth;   // planted (o*, p*)
  std::vector<bool> strong;  // planted strong-personality users
};

// Strong users get one dominant trait from U(0.7, 1.0) and the other from
// U(0.35, 0.5); indifferent users draw both from U(0, 0.2). A user is a
// high-o (high-p) endpoint when o* (p*) >= 0.7. Link and sign propensities
// come from a rank-d_true logistic model whose positive (negative) rate is
// multiplied by pos_boost (neg_boost) per high-o (high-p) endpoint, rescaled
// to the requested density. Realized signs flip with probability `noise`.
//
// Each user rates ratings_per_side consensus-low and as many consensus-high
// items so that the rating-derived scores equal round(o* K)/K and
// round(p* K)/K with K = ratings_per_side.
SynthData generate(const SynthConfig& cfg);

inline constexpr double kHighTraitCutoff = 0.7;

}  // namespace slp
