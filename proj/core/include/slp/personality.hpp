#pragma once

// Optimism and pessimism scores inferred from feedback behavior.
//
// Ratings: a user is optimistic when they rate consensus-low items high, and
// pessimistic when they rate consensus-high items low. Opinions: a user is
// optimistic when they send above-average praise to users who receive
// above-average criticism, and symmetrically for pessimism.
//
// Each score is |subset| / |superset|. An empty superset yields
// `empty_set_score` (0 by default).

#include <cstddef>
#include <vector>

#include "slp/graph.hpp"

namespace slp {

struct ScenarioConfig {
  int rating_threshold = 3;  // ratings <= threshold are low
  double empty_set_score = 0.0;

  void validate() const;
};

// Member lists behind one user's two scores. For ratings the members are
// item indices, for opinions they are user indices.
struct TraitSets {
  std::vector<std::size_t> low;           // O_L
  std::vector<std::size_t> high_on_low;   // O_HL, subset of O_L
  std::vector<std::size_t> high;          // P_H
  std::vector<std::size_t> low_on_high;   // P_LH, subset of P_H
};

TraitSets rating_trait_sets(const RatingsTable& table, const ScenarioConfig& cfg, UserIndex user);

std::vector<double> optimism_from_ratings(const RatingsTable& table, const ScenarioConfig& cfg = {});
std::vector<double> pessimism_from_ratings(const RatingsTable& table, const ScenarioConfig& cfg = {});
PersonalityScores scores_from_ratings(const RatingsTable& table, const ScenarioConfig& cfg = {});

// Network-wide and per-receiver opinion totals. Averages are kept as exact
// integer totals; comparisons against them are done by cross-multiplying so
// every strict inequality is decided exactly.
class OpinionAverages {
 public:
  explicit OpinionAverages(const OpinionCounts& op);

  // N-bar_j > N-bar, i.e. total_neg_j / (n-1) > total_neg / (n(n-1))
  bool receives_above_average_negative(UserIndex j) const;
  // P-bar_j > P-bar
  bool receives_above_average_positive(UserIndex j) const;
  // count > P-bar_k, i.e. count * (n-1) > received_pos_k
  bool positive_exceeds_received_average(std::uint64_t count, UserIndex k) const;
  // count > N-bar_k
  bool negative_exceeds_received_average(std::uint64_t count, UserIndex k) const;

  double mean_negative() const;                 // N-bar over n(n-1) ordered pairs
  double mean_positive() const;                 // P-bar
  double received_negative_mean(UserIndex j) const;  // N-bar_j over n-1 senders
  double received_positive_mean(UserIndex j) const;  // P-bar_j

 private:
  std::size_t n_;
  std::uint64_t total_pos_ = 0;
  std::uint64_t total_neg_ = 0;
  std::vector<std::uint64_t> received_pos_;
  std::vector<std::uint64_t> received_neg_;
};

// Throws ValidationError when op.n() < 2.
TraitSets opinion_trait_sets(const OpinionCounts& op, const OpinionAverages& avg, UserIndex user);

std::vector<double> optimism_from_opinions(const OpinionCounts& op, const ScenarioConfig& cfg = {});
std::vector<double> pessimism_from_opinions(const OpinionCounts& op, const ScenarioConfig& cfg = {});
PersonalityScores scores_from_opinions(const OpinionCounts& op, const ScenarioConfig& cfg = {});

}  // namespace slp
