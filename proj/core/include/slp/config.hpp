#pragma once

// Plain-text run configuration: one `key = value` per line, '#' comments.
// Unknown keys are rejected. Every key is optional; defaults match the
// reference settings (lambda1 = lambda2 = 0.1, d = 100, t_o = t_p = 0.5,
// alpha = beta = 80, rank-gap margins 15/10/5).
//
//   lambda1 lambda2 alpha beta d t_o t_p lr_u lr_v max_iter tol seed
//   backtracking                     true|false
//   margin.gamma  margin.delta       "cutoff:margin,..." in descending cutoffs
//   margin.default
//   split.folds split.train_percent split.seed
//   split.fractions                  "50,60,70,80,90,100"
//   sensitivity.weights              full grid over these values for alpha and beta
//   sensitivity.grid                 explicit "alpha:beta,..." cells
//   scenario.r_th scenario.empty_score
//   synth.n synth.frac_strong synth.edge_density synth.pos_boost synth.neg_boost
//   synth.d_true synth.noise synth.seed synth.sign_bias synth.latent_scale
//   synth.items_per_side synth.ratings_per_side
//   jobs
//   graph scores                     default input paths

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slp/evaluation.hpp"
#include "slp/model.hpp"
#include "slp/personality.hpp"
#include "slp/synthgen.hpp"

namespace slp {

struct RunConfig {
  Hyperparams hyper;
  MarginRule margins;
  SplitPlan split;
  std::vector<int> fractions{kDefaultFractions.begin(), kDefaultFractions.end()};
  std::vector<std::pair<double, double>> grid = full_grid(kDefaultPenaltyWeights);
  ScenarioConfig scenario;
  SynthConfig synth;
  unsigned jobs = 1;
  std::optional<std::filesystem::path> graph_file;
  std::optional<std::filesystem::path> scores_file;

  void validate() const;
};

RunConfig parse_run_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

// Writes every key with its current value; parse_run_config reads it back.
void write_run_config(const RunConfig& config, std::ostream& out);

}  // namespace slp
