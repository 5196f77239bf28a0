#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slp/graph.hpp"
#include "slp/model.hpp"

namespace slp {

struct TrainReport {
  std::size_t iterations = 0;
  // J at the initial model followed by J after every accepted step.
  std::vector<double> objective_trace;
  bool converged = false;
  std::size_t active_optimism = 0;
  std::size_t active_pessimism = 0;

  friend bool operator==(const TrainReport&, const TrainReport&) = default;
};

struct TrainResult {
  FactorModel model;
  TrainReport report;
};

// Entries i.i.d. uniform on (-0.01, 0.01) from a generator seeded with `seed`.
FactorModel init_model(std::size_t n, std::size_t dim, std::uint64_t seed);

// Full-batch gradient descent on the SLP objective. Each iteration refreshes
// the active hinge sets, takes simultaneous steps on U and V from the same
// point and, with backtracking on, halves both step sizes (up to 30 times)
// until the objective does not increase. Stops once the relative change of J
// drops below hyper.tol or after hyper.max_iter iterations.
//
// Throws TrainingError when the objective or gradient becomes non-finite.
TrainResult train(const SignedGraph& graph, const PersonalityScores& scores,
                  const Hyperparams& hyper, const MarginRule& rule);

// train() with alpha = beta = 0.
TrainResult train_mf_baseline(const SignedGraph& graph, const Hyperparams& hyper);

// The descent loop on an already-bound objective.
TrainResult minimize(const SlpObjective& objective, FactorModel start);

}  // namespace slp
