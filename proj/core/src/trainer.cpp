#include "slp/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "slp/errors.hpp"

namespace slp {

namespace {

constexpr int kMaxHalvings = 30;
constexpr double kInitRange = 0.01;

void require_finite(double value, std::size_t iteration, const char* what) {
  if (!std::isfinite(value)) {
    throw TrainingError(std::string("non-finite ") + what + " at iteration " +
                        std::to_string(iteration));
  }
}

}  // namespace

FactorModel init_model(std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw ValidationError("model needs n >= 1 and d >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-kInitRange, kInitRange);
  auto draw = [&] {
    double x = unif(rng);
    while (x == -kInitRange) x = unif(rng);  // open interval
    return x;
  };
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(dim);
  Matrix u(rows, cols);
  Matrix v(cols, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) u(r, c) = draw();
  for (Eigen::Index r = 0; r < cols; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) v(r, c) = draw();
  return {std::move(u), std::move(v)};
}

TrainResult minimize(const SlpObjective& objective, FactorModel start) {
  const auto& hyper = objective.hyper();
  TrainResult result{std::move(start), {}};
  auto& model = result.model;
  auto& report = result.report;

  ObjectiveValue current = objective.evaluate(model);
  require_finite(current.value(), 0, "objective");
  report.objective_trace.push_back(current.value());

  for (std::size_t iter = 1; iter <= hyper.max_iter; ++iter) {
    const Gradient grad = objective.gradient(model, current.active);
    if (!grad.users.allFinite() || !grad.correlation.allFinite()) {
      throw TrainingError("non-finite gradient at iteration " + std::to_string(iter));
    }

    double lr_u = hyper.lr_u;
    double lr_v = hyper.lr_v;
    FactorModel trial(model.users - lr_u * grad.users, model.correlation - lr_v * grad.correlation);
    ObjectiveValue next = objective.evaluate(trial);
    if (hyper.backtracking) {
      int halvings = 0;
      while (!(next.value() <= current.value()) && halvings < kMaxHalvings) {
        lr_u *= 0.5;
        lr_v *= 0.5;
        ++halvings;
        trial.users = model.users - lr_u * grad.users;
        trial.correlation = model.correlation - lr_v * grad.correlation;
        next = objective.evaluate(trial);
      }
      if (!(next.value() <= current.value())) {
        // no descent along the gradient at any tried step: stationary point
        report.converged = true;
        break;
      }
    }
    require_finite(next.value(), iter, "objective");

    const double previous = current.value();
    model = std::move(trial);
    current = std::move(next);
    report.iterations = iter;
    report.objective_trace.push_back(current.value());

    const double change =
        std::abs(current.value() - previous) / std::max(previous, std::numeric_limits<double>::min());
    if (change < hyper.tol) {
      report.converged = true;
      break;
    }
  }
  report.active_optimism = current.active.gamma.size();
  report.active_pessimism = current.active.delta.size();
  return result;
}

TrainResult train(const SignedGraph& graph, const PersonalityScores& scores,
                  const Hyperparams& hyper, const MarginRule& rule) {
  const SlpObjective objective(graph, scores, hyper, rule);
  return minimize(objective, init_model(graph.n(), hyper.dim, hyper.seed));
}

TrainResult train_mf_baseline(const SignedGraph& graph, const Hyperparams& hyper) {
  Hyperparams plain = hyper;
  plain.alpha = 0.0;
  plain.beta = 0.0;
  const SlpObjective objective(graph, plain);
  return minimize(objective, init_model(graph.n(), plain.dim, plain.seed));
}

}  // namespace slp
