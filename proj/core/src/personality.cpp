#include "slp/personality.hpp"

#include <string>

#include "slp/errors.hpp"

namespace slp {

namespace {

double ratio(std::size_t part, std::size_t whole, double empty_score) {
  if (whole == 0) return empty_score;
  return static_cast<double>(part) / static_cast<double>(whole);
}

void require_pairwise(const OpinionCounts& op) {
  if (op.n() < 2) {
    throw ValidationError("opinion averages need at least 2 users, got " + std::to_string(op.n()));
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (rating_threshold < 1 || rating_threshold >= 5) {
    throw ValidationError("rating threshold must lie in [1, 5), got " +
                          std::to_string(rating_threshold));
  }
  if (!(empty_set_score >= 0.0 && empty_set_score <= 1.0)) {
    throw ValidationError("empty-set score must lie in [0, 1]");
  }
}

TraitSets rating_trait_sets(const RatingsTable& table, const ScenarioConfig& cfg, UserIndex user) {
  TraitSets sets;
  const auto threshold = static_cast<double>(cfg.rating_threshold);
  const auto& means = table.item_means();
  for (const auto& r : table.ratings_of(user)) {
    // every rated item has a mean
    const double mean = *means[r.item];
    if (mean <= threshold) {
      sets.low.push_back(r.item);
      if (r.value > cfg.rating_threshold) sets.high_on_low.push_back(r.item);
    } else {
      sets.high.push_back(r.item);
      if (r.value <= cfg.rating_threshold) sets.low_on_high.push_back(r.item);
    }
  }
  return sets;
}

std::vector<double> optimism_from_ratings(const RatingsTable& table, const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<double> o(table.n_users());
  for (UserIndex i = 0; i < o.size(); ++i) {
    const auto sets = rating_trait_sets(table, cfg, i);
    o[i] = ratio(sets.high_on_low.size(), sets.low.size(), cfg.empty_set_score);
  }
  return o;
}

std::vector<double> pessimism_from_ratings(const RatingsTable& table, const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<double> p(table.n_users());
  for (UserIndex i = 0; i < p.size(); ++i) {
    const auto sets = rating_trait_sets(table, cfg, i);
    p[i] = ratio(sets.low_on_high.size(), sets.high.size(), cfg.empty_set_score);
  }
  return p;
}

PersonalityScores scores_from_ratings(const RatingsTable& table, const ScenarioConfig& cfg) {
  return PersonalityScores(optimism_from_ratings(table, cfg), pessimism_from_ratings(table, cfg));
}

OpinionAverages::OpinionAverages(const OpinionCounts& op)
    : n_(op.n()), received_pos_(op.n(), 0), received_neg_(op.n(), 0) {
  require_pairwise(op);
  for (const auto& e : op.entries()) {
    total_pos_ += e.positive;
    total_neg_ += e.negative;
    received_pos_[e.dst] += e.positive;
    received_neg_[e.dst] += e.negative;
  }
}

// received_j / (n-1) > total / (n(n-1))  <=>  n * received_j > total
bool OpinionAverages::receives_above_average_negative(UserIndex j) const {
  return n_ * received_neg_[j] > total_neg_;
}

bool OpinionAverages::receives_above_average_positive(UserIndex j) const {
  return n_ * received_pos_[j] > total_pos_;
}

bool OpinionAverages::positive_exceeds_received_average(std::uint64_t count, UserIndex k) const {
  return count * (n_ - 1) > received_pos_[k];
}

bool OpinionAverages::negative_exceeds_received_average(std::uint64_t count, UserIndex k) const {
  return count * (n_ - 1) > received_neg_[k];
}

double OpinionAverages::mean_negative() const {
  return static_cast<double>(total_neg_) / static_cast<double>(n_ * (n_ - 1));
}

double OpinionAverages::mean_positive() const {
  return static_cast<double>(total_pos_) / static_cast<double>(n_ * (n_ - 1));
}

double OpinionAverages::received_negative_mean(UserIndex j) const {
  return static_cast<double>(received_neg_[j]) / static_cast<double>(n_ - 1);
}

double OpinionAverages::received_positive_mean(UserIndex j) const {
  return static_cast<double>(received_pos_[j]) / static_cast<double>(n_ - 1);
}

TraitSets opinion_trait_sets(const OpinionCounts& op, const OpinionAverages& avg, UserIndex user) {
  require_pairwise(op);
  TraitSets sets;
  for (const auto& e : op.entries_of(user)) {
    if (e.positive != 0 && avg.receives_above_average_negative(e.dst)) {
      sets.low.push_back(e.dst);
      if (avg.positive_exceeds_received_average(e.positive, e.dst)) {
        sets.high_on_low.push_back(e.dst);
      }
    }
    if (e.negative != 0 && avg.receives_above_average_positive(e.dst)) {
      sets.high.push_back(e.dst);
      if (avg.negative_exceeds_received_average(e.negative, e.dst)) {
        sets.low_on_high.push_back(e.dst);
      }
    }
  }
  return sets;
}

std::vector<double> optimism_from_opinions(const OpinionCounts& op, const ScenarioConfig& cfg) {
  const OpinionAverages avg(op);
  std::vector<double> o(op.n());
  for (UserIndex i = 0; i < o.size(); ++i) {
    const auto sets = opinion_trait_sets(op, avg, i);
    o[i] = ratio(sets.high_on_low.size(), sets.low.size(), cfg.empty_set_score);
  }
  return o;
}

std::vector<double> pessimism_from_opinions(const OpinionCounts& op, const ScenarioConfig& cfg) {
  const OpinionAverages avg(op);
  std::vector<double> p(op.n());
  for (UserIndex i = 0; i < p.size(); ++i) {
    const auto sets = opinion_trait_sets(op, avg, i);
    p[i] = ratio(sets.low_on_high.size(), sets.high.size(), cfg.empty_set_score);
  }
  return p;
}

PersonalityScores scores_from_opinions(const OpinionCounts& op, const ScenarioConfig& cfg) {
  return PersonalityScores(optimism_from_opinions(op, cfg), pessimism_from_opinions(op, cfg));
}

}  // namespace slp
