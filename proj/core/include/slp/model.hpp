#pragma once

// Personality-regularized low-rank factorization of a signed network.
//
// The predicted matrix is G-hat = U V U^T with U (n x d) holding one latent
// row per user and V (d x d) a general, non-symmetric correlation matrix. The
// objective is
//
//   J = sum_{observed (i,j)} (G_ij - G-hat_ij)^2 + l1 |U|_F^2 + l2 |V|_F^2
//     + alpha * sum_{o_i - o_j > t_o} max(0, d_j - d_i + gamma_ij)^2
//     + beta  * sum_{p_j - p_i > t_p} max(0, d_j - d_i + delta_ij)^2
//
// where d_i is the predicted row sum of G-hat for user i. The hinge pairs are
// fixed by the personality scores; which of them are active (positive hinge)
// depends on the current model and is recomputed at every evaluation.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "slp/graph.hpp"

namespace slp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct FactorModel {
  Matrix users;        // U, n x d
  Matrix correlation;  // V, d x d

  FactorModel() = default;
  FactorModel(Matrix u, Matrix v);

  std::size_t n() const noexcept { return static_cast<std::size_t>(users.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(users.cols()); }

  // Shapes agree and every entry is finite.
  void validate() const;
};

// G-hat_ij = U_i V U_j^T. Throws std::out_of_range for bad indices.
double predict_pair(const FactorModel& model, UserIndex i, UserIndex j);

// d_i = U_i V s with s the column sums of U; O(n d + d^2), never forms G-hat.
Vector predicted_degrees(const FactorModel& model);

// Checkpoint text: "SLP n d", then n rows of U and d rows of V.
void save_model(const FactorModel& model, const std::filesystem::path& path);
FactorModel load_model(const std::filesystem::path& path);
void write_model(const FactorModel& model, std::ostream& out);
FactorModel read_model(std::istream& in, const std::string& source = "<stream>");

struct Hyperparams {
  double lambda1 = 0.1;
  double lambda2 = 0.1;
  double alpha = 80.0;
  double beta = 80.0;
  std::size_t dim = 100;
  double t_o = 0.5;
  double t_p = 0.5;
  double lr_u = 1e-3;
  double lr_v = 1e-3;
  std::size_t max_iter = 500;
  double tol = 1e-5;
  std::uint64_t seed = 1;
  bool backtracking = true;

  void validate() const;
};

enum class MarginKind { gamma, delta };

struct MarginTier {
  std::size_t min_rank_gap = 0;
  double margin = 0.0;

  friend bool operator==(const MarginTier&, const MarginTier&) = default;
};

// Piecewise map from the rank difference of two users to a required degree
// gap. Tiers are scanned in order of decreasing cutoff; the first one whose
// cutoff is <= the gap applies, otherwise `fallback`.
struct MarginRule {
  std::vector<MarginTier> gamma{{1500, 15.0}, {200, 10.0}};
  std::vector<MarginTier> delta{{500, 15.0}, {150, 10.0}};
  double fallback = 5.0;

  void validate() const;
  double margin_for(MarginKind kind, std::size_t rank_gap) const;

  friend bool operator==(const MarginRule&, const MarginRule&) = default;
};

// Position of each user when sorted by descending score, ties broken by
// ascending user index.
struct PersonalityRanks {
  std::vector<std::size_t> optimism;
  std::vector<std::size_t> pessimism;

  explicit PersonalityRanks(const PersonalityScores& scores);
};

double margin(const MarginRule& rule, const PersonalityRanks& ranks,
              std::pair<UserIndex, UserIndex> pair, MarginKind kind);
double margin(const MarginRule& rule, const PersonalityScores& scores,
              std::pair<UserIndex, UserIndex> pair, MarginKind kind);

using UserPair = std::pair<UserIndex, UserIndex>;

struct CandidatePairs {
  std::vector<UserPair> optimism;   // o_i - o_j > t_o
  std::vector<UserPair> pessimism;  // p_j - p_i > t_p
};

CandidatePairs candidate_pairs(const PersonalityScores& scores, double t_o, double t_p);

struct HingePair {
  UserIndex i = 0;
  UserIndex j = 0;
  double margin = 0.0;
};

// Candidate pairs with their margins attached; fixed for a training run.
struct PenaltyPlan {
  std::vector<HingePair> optimism;
  std::vector<HingePair> pessimism;

  PenaltyPlan() = default;
  PenaltyPlan(const PersonalityScores& scores, const Hyperparams& hyper, const MarginRule& rule);
};

// Indices into PenaltyPlan::optimism / ::pessimism whose hinge is positive.
struct ActiveSets {
  std::vector<std::size_t> gamma;
  std::vector<std::size_t> delta;

  friend bool operator==(const ActiveSets&, const ActiveSets&) = default;
};

struct ObjectiveParts {
  double reconstruction = 0.0;     // masked squared error
  double ridge = 0.0;              // l1 |U|^2 + l2 |V|^2
  double optimism_penalty = 0.0;   // unweighted hinge sum
  double pessimism_penalty = 0.0;  // unweighted hinge sum
  double total = 0.0;
};

struct ObjectiveValue {
  ObjectiveParts parts;
  ActiveSets active;

  double value() const noexcept { return parts.total; }
};

struct Gradient {
  Matrix users;
  Matrix correlation;
};

// The objective bound to one training problem. Holds a reference to the
// graph, which must outlive it.
class SlpObjective {
 public:
  SlpObjective(const SignedGraph& graph, const PersonalityScores& scores, const Hyperparams& hyper,
               const MarginRule& rule);
  // Plain factorization objective: no personality terms.
  SlpObjective(const SignedGraph& graph, const Hyperparams& hyper);

  // J at the model and the active sets realized there. Throws
  // ValidationError when the model does not match the graph.
  ObjectiveValue evaluate(const FactorModel& model) const;

  // J with the hinge sums restricted to `active` and taken without the
  // max(0, .) clamp. Equals evaluate() at the point the sets came from.
  double evaluate_frozen(const FactorModel& model, const ActiveSets& active) const;

  // Exact gradient of J with the active sets held fixed.
  Gradient gradient(const FactorModel& model, const ActiveSets& active) const;

  const PenaltyPlan& plan() const noexcept { return plan_; }
  const Hyperparams& hyper() const noexcept { return hyper_; }
  const SignedGraph& graph() const noexcept { return *graph_; }

 private:
  void check_shape(const FactorModel& model) const;
  double reconstruction(const FactorModel& model) const;

  const SignedGraph* graph_;
  Hyperparams hyper_;
  PenaltyPlan plan_;
};

}  // namespace slp
