#pragma once

// Cross-validated evaluation of signed link predictors: stratified splits,
// rank-statistic AUC, the Random baseline and the experiment drivers
// (training-fraction sweep, personality-group ablation, alpha/beta grid).

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slp/graph.hpp"
#include "slp/model.hpp"

namespace slp {

struct SplitPlan {
  std::size_t folds = 5;
  int train_percent = 100;  // x: share of the remaining links used for training
  std::uint64_t seed = 1;

  void validate() const;
};

struct Fold {
  SignedGraph train;             // observed matrix fed to the predictors
  std::vector<SignedEdge> test;  // held-out links, sorted by (src, dst)
  std::size_t train_positive = 0;
  std::size_t train_negative = 0;
  std::size_t test_positive = 0;
  std::size_t test_negative = 0;
};

// Positives and negatives are shuffled and dealt into `folds` folds
// independently. For fold a the test set is fold a and the training graph is
// the first x% of a seeded permutation of the remaining positives plus the
// first x% of the remaining negatives. Training sets for smaller x are
// prefixes of those for larger x. Throws ValidationError when either sign
// class has fewer links than there are folds.
std::vector<Fold> make_splits(const SignedGraph& graph, const SplitPlan& plan);

struct ScoredLabel {
  double score = 0.0;
  Sign label = Sign::positive;
};

// Probability that a random positive outranks a random negative, ties
// counting one half. Computed from mid-ranks in O(m log m). Throws
// ValidationError unless both labels are present and all scores are numbers.
double auc(std::span<const ScoredLabel> scored);

struct FoldResult {
  std::size_t fold = 0;
  double auc = 0.0;
  std::size_t train_positive = 0;
  std::size_t train_negative = 0;
  std::size_t test_positive = 0;
  std::size_t test_negative = 0;
};

// Scores every test link with G-hat_ij and reports the AUC against its sign.
FoldResult evaluate_model(const FactorModel& model, std::span<const SignedEdge> test);

// Scores every test link uniformly on (-1, 1).
FoldResult random_baseline(std::span<const SignedEdge> test, std::uint64_t seed);

struct AucRecord {
  std::string method;
  int x = 0;
  std::size_t fold = 0;
  double auc = 0.0;
};

class ResultTable {
 public:
  void add(AucRecord record) { rows_.push_back(std::move(record)); }
  const std::vector<AucRecord>& rows() const noexcept { return rows_; }

  // Mean AUC over folds; throws std::out_of_range when there are no rows.
  double mean(const std::string& method, int x) const;
  std::vector<double> aucs(const std::string& method, int x) const;

  // "method,x,fold,auc", one row per record.
  void write_csv(std::ostream& out) const;
  // "method,x,mean_auc", means rounded to 4 decimals, first-seen order.
  void write_means_csv(std::ostream& out) const;

 private:
  std::vector<AucRecord> rows_;
};

struct ExperimentOptions {
  unsigned jobs = 1;  // worker threads for independent folds and cells
};

inline constexpr std::array<int, 6> kDefaultFractions{50, 60, 70, 80, 90, 100};

// Seed for the model initialization of one fold; shared by SLP and MF.
std::uint64_t fold_seed(std::uint64_t base, std::size_t fold);

// For each x and fold: trains SLP and MF on the fold's training graph and
// evaluates them and Random on the fold's test links. Methods are named
// "SLP", "MF" and "Random".
ResultTable sweep_training_fraction(const SignedGraph& graph, const PersonalityScores& scores,
                                    const Hyperparams& hyper, const MarginRule& rule,
                                    const SplitPlan& plan, std::span<const int> fractions,
                                    const ExperimentOptions& options = {});

struct PersonalityGroups {
  std::vector<bool> strong;  // true for S, false for I
  std::array<double, 2> strong_centroid{};
  std::array<double, 2> indifferent_centroid{};
  std::size_t iterations = 0;

  std::size_t strong_count() const;
};

// 2-means on (o_i, p_i), seeded with the two users farthest apart, at most
// 100 Lloyd iterations. The cluster whose centroid has the larger norm is the
// strong group. Returns nullopt when every user has the same scores.
std::optional<PersonalityGroups> two_means(const PersonalityScores& scores);

// Copy of `scores` with both scores of the selected users set to 0.
PersonalityScores zero_scores(const PersonalityScores& scores, const std::vector<bool>& which);

struct AblationResult {
  PersonalityGroups groups;
  ResultTable table;  // methods "SLP-S", "SLP-I", "SLP-SI" at x = 100
};

// Three SLP runs at x = 100: keeping only the strong users' scores, keeping
// only the indifferent users' scores, keeping all. Returns nullopt when the
// users cannot be split (all scores identical).
std::optional<AblationResult> personality_group_ablation(const SignedGraph& graph,
                                                         const PersonalityScores& scores,
                                                         const Hyperparams& hyper,
                                                         const MarginRule& rule,
                                                         const SplitPlan& plan,
                                                         const ExperimentOptions& options = {});

struct SensitivityCell {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> fold_aucs;
  double mean_auc = 0.0;
};

inline constexpr std::array<double, 5> kDefaultPenaltyWeights{0.0, 0.1, 10.0, 80.0, 100.0};

std::vector<std::pair<double, double>> full_grid(std::span<const double> weights);

// Mean SLP AUC over folds at x = 100 for every (alpha, beta) cell.
std::vector<SensitivityCell> sensitivity_grid(const SignedGraph& graph,
                                              const PersonalityScores& scores,
                                              const Hyperparams& hyper, const MarginRule& rule,
                                              const SplitPlan& plan,
                                              std::span<const std::pair<double, double>> grid,
                                              const ExperimentOptions& options = {});

// "alpha,beta,auc" with one row per cell.
void write_sensitivity_csv(std::span<const SensitivityCell> cells, std::ostream& out);

}  // namespace slp
