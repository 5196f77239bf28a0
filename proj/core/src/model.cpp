#include "slp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "slp/errors.hpp"
#include "text_io.hpp"

namespace slp {

FactorModel::FactorModel(Matrix u, Matrix v) : users(std::move(u)), correlation(std::move(v)) {}

void FactorModel::validate() const {
  if (correlation.rows() != users.cols() || correlation.cols() != users.cols()) {
    throw ValidationError("correlation matrix must be " + std::to_string(users.cols()) + " x " +
                          std::to_string(users.cols()));
  }
  if (!users.allFinite() || !correlation.allFinite()) {
    throw ValidationError("model contains non-finite entries");
  }
}

double predict_pair(const FactorModel& model, UserIndex i, UserIndex j) {
  if (i >= model.n() || j >= model.n()) {
    throw std::out_of_range("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside model of " + std::to_string(model.n()) + " users");
  }
  return model.users.row(i) * model.correlation * model.users.row(j).transpose();
}

Vector predicted_degrees(const FactorModel& model) {
  const Vector column_sums = model.users.colwise().sum().transpose();
  return model.users * (model.correlation * column_sums);
}

void write_model(const FactorModel& model, std::ostream& out) {
  out << "SLP " << model.n() << ' ' << model.dim() << '\n';
  auto write_rows = [&out](const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c > 0) out << ' ';
        out << detail::format_double(m(r, c));
      }
      out << '\n';
    }
  };
  write_rows(model.users);
  write_rows(model.correlation);
}

FactorModel read_model(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto next_fields = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      auto fields = detail::split_fields(line);
      if (!fields.empty()) return fields;
    }
    throw ParseError(source + ": unexpected end of model checkpoint");
  };
  const auto header = next_fields();
  if (header.size() != 3 || header[0] != "SLP") {
    detail::fail_line(source, line_no, "expected header 'SLP n d'");
  }
  const auto n = detail::parse_number<std::size_t>(header[1], source, line_no);
  const auto d = detail::parse_number<std::size_t>(header[2], source, line_no);
  if (d == 0) detail::fail_line(source, line_no, "latent dimension must be positive");

  auto read_rows = [&](Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const auto fields = next_fields();
      if (fields.size() != static_cast<std::size_t>(m.cols())) {
        detail::fail_line(source, line_no, "expected " + std::to_string(m.cols()) + " values");
      }
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = detail::parse_number<double>(fields[static_cast<std::size_t>(c)], source, line_no);
      }
    }
  };
  FactorModel model(Matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)),
                    Matrix(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  read_rows(model.users);
  read_rows(model.correlation);
  model.validate();
  return model;
}

void save_model(const FactorModel& model, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  write_model(model, out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

FactorModel load_model(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_model(in, path.string());
}

void Hyperparams::validate() const {
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(name) + " must be a finite non-negative number");
    }
  };
  non_negative(lambda1, "lambda1");
  non_negative(lambda2, "lambda2");
  non_negative(alpha, "alpha");
  non_negative(beta, "beta");
  non_negative(t_o, "t_o");
  non_negative(t_p, "t_p");
  non_negative(lr_u, "lr_u");
  non_negative(lr_v, "lr_v");
  if (dim < 1) throw ValidationError("latent dimension d must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
}

void MarginRule::validate() const {
  auto check = [this](const std::vector<MarginTier>& tiers, const char* name) {
    for (std::size_t k = 0; k < tiers.size(); ++k) {
      if (!(tiers[k].margin > 0.0)) {
        throw ValidationError(std::string(name) + " margins must be positive");
      }
      if (k > 0 && tiers[k].min_rank_gap >= tiers[k - 1].min_rank_gap) {
        throw ValidationError(std::string(name) + " cutoffs must be strictly descending");
      }
    }
  };
  check(gamma, "gamma");
  check(delta, "delta");
  if (!(fallback > 0.0)) throw ValidationError("default margin must be positive");
}

double MarginRule::margin_for(MarginKind kind, std::size_t rank_gap) const {
  const auto& tiers = kind == MarginKind::gamma ? gamma : delta;
  for (const auto& tier : tiers) {
    if (rank_gap >= tier.min_rank_gap) return tier.margin;
  }
  return fallback;
}

namespace {

std::vector<std::size_t> descending_ranks(const std::vector<double>& score) {
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&score](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  std::vector<std::size_t> rank(score.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

std::size_t gap(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

PersonalityRanks::PersonalityRanks(const PersonalityScores& scores)
    : optimism(descending_ranks(scores.optimism)), pessimism(descending_ranks(scores.pessimism)) {}

double margin(const MarginRule& rule, const PersonalityRanks& ranks, UserPair pair,
              MarginKind kind) {
  const auto& rank = kind == MarginKind::gamma ? ranks.optimism : ranks.pessimism;
  return rule.margin_for(kind, gap(rank.at(pair.first), rank.at(pair.second)));
}

double margin(const MarginRule& rule, const PersonalityScores& scores, UserPair pair,
              MarginKind kind) {
  return margin(rule, PersonalityRanks(scores), pair, kind);
}

CandidatePairs candidate_pairs(const PersonalityScores& scores, double t_o, double t_p) {
  scores.validate();
  CandidatePairs out;
  const auto n = scores.size();
  for (UserIndex i = 0; i < n; ++i) {
    for (UserIndex j = 0; j < n; ++j) {
      if (i == j) continue;
      if (scores.optimism[i] - scores.optimism[j] > t_o) out.optimism.emplace_back(i, j);
      if (scores.pessimism[j] - scores.pessimism[i] > t_p) out.pessimism.emplace_back(i, j);
    }
  }
  return out;
}

PenaltyPlan::PenaltyPlan(const PersonalityScores& scores, const Hyperparams& hyper,
                         const MarginRule& rule) {
  rule.validate();
  if (hyper.alpha == 0.0 && hyper.beta == 0.0) return;
  const PersonalityRanks ranks(scores);
  const auto candidates = candidate_pairs(scores, hyper.t_o, hyper.t_p);
  if (hyper.alpha != 0.0) {
    optimism.reserve(candidates.optimism.size());
    for (const auto& pr : candidates.optimism) {
      optimism.push_back({pr.first, pr.second, margin(rule, ranks, pr, MarginKind::gamma)});
    }
  }
  if (hyper.beta != 0.0) {
    pessimism.reserve(candidates.pessimism.size());
    for (const auto& pr : candidates.pessimism) {
      pessimism.push_back({pr.first, pr.second, margin(rule, ranks, pr, MarginKind::delta)});
    }
  }
}

SlpObjective::SlpObjective(const SignedGraph& graph, const PersonalityScores& scores,
                           const Hyperparams& hyper, const MarginRule& rule)
    : graph_(&graph), hyper_(hyper) {
  hyper_.validate();
  if (scores.size() != graph.n()) {
    throw ValidationError("scores cover " + std::to_string(scores.size()) +
                          " users but the graph has " + std::to_string(graph.n()));
  }
  plan_ = PenaltyPlan(scores, hyper_, rule);
}

SlpObjective::SlpObjective(const SignedGraph& graph, const Hyperparams& hyper)
    : graph_(&graph), hyper_(hyper) {
  hyper_.validate();
}

void SlpObjective::check_shape(const FactorModel& model) const {
  if (model.n() != graph_->n()) {
    throw ValidationError("model has " + std::to_string(model.n()) + " users, graph has " +
                          std::to_string(graph_->n()));
  }
  if (static_cast<std::size_t>(model.correlation.rows()) != model.dim() ||
      static_cast<std::size_t>(model.correlation.cols()) != model.dim()) {
    throw ValidationError("correlation matrix is not d x d");
  }
}

double SlpObjective::reconstruction(const FactorModel& model) const {
  const Matrix left = model.users * model.correlation;  // rows U_i V
  double sum = 0.0;
  for (const auto& e : graph_->edges()) {
    const double residual =
        left.row(static_cast<Eigen::Index>(e.src)).dot(model.users.row(static_cast<Eigen::Index>(e.dst))) -
        to_int(e.sign);
    sum += residual * residual;
  }
  return sum;
}

ObjectiveValue SlpObjective::evaluate(const FactorModel& model) const {
  check_shape(model);
  ObjectiveValue out;
  auto& parts = out.parts;
  parts.reconstruction = reconstruction(model);
  parts.ridge = hyper_.lambda1 * model.users.squaredNorm() +
                hyper_.lambda2 * model.correlation.squaredNorm();
  parts.total = parts.reconstruction + parts.ridge;
  if (plan_.optimism.empty() && plan_.pessimism.empty()) return out;

  const Vector degree = predicted_degrees(model);
  auto hinge_sum = [&degree](const std::vector<HingePair>& pairs, std::vector<std::size_t>& active) {
    double sum = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& hp = pairs[k];
      const double h = degree[static_cast<Eigen::Index>(hp.j)] -
                       degree[static_cast<Eigen::Index>(hp.i)] + hp.margin;
      if (h > 0.0) {
        sum += h * h;
        active.push_back(k);
      }
    }
    return sum;
  };
  parts.optimism_penalty = hinge_sum(plan_.optimism, out.active.gamma);
  parts.pessimism_penalty = hinge_sum(plan_.pessimism, out.active.delta);
  if (hyper_.alpha != 0.0) parts.total += hyper_.alpha * parts.optimism_penalty;
  if (hyper_.beta != 0.0) parts.total += hyper_.beta * parts.pessimism_penalty;
  return out;
}

double SlpObjective::evaluate_frozen(const FactorModel& model, const ActiveSets& active) const {
  check_shape(model);
  double total = reconstruction(model) + hyper_.lambda1 * model.users.squaredNorm() +
                 hyper_.lambda2 * model.correlation.squaredNorm();
  if (active.gamma.empty() && active.delta.empty()) return total;
  const Vector degree = predicted_degrees(model);
  auto frozen_sum = [&degree](const std::vector<HingePair>& pairs,
                              const std::vector<std::size_t>& which) {
    double sum = 0.0;
    for (auto k : which) {
      const auto& hp = pairs.at(k);
      const double h = degree[static_cast<Eigen::Index>(hp.j)] -
                       degree[static_cast<Eigen::Index>(hp.i)] + hp.margin;
      sum += h * h;
    }
    return sum;
  };
  if (!active.gamma.empty()) total += hyper_.alpha * frozen_sum(plan_.optimism, active.gamma);
  if (!active.delta.empty()) total += hyper_.beta * frozen_sum(plan_.pessimism, active.delta);
  return total;
}

Gradient SlpObjective::gradient(const FactorModel& model, const ActiveSets& active) const {
  check_shape(model);
  const Matrix& U = model.users;
  const Matrix& V = model.correlation;
  const auto n = static_cast<Eigen::Index>(model.n());
  const auto d = static_cast<Eigen::Index>(model.dim());

  // Reconstruction: residual e_ij = U_i V U_j^T - G_ij over observed entries.
  //   dJ/dU_i += 2 e U_j V^T,  dJ/dU_j += 2 e U_i V,  dJ/dV = 2 U^T M
  // with M_i = sum_j e_ij U_j.
  const Matrix left = U * V;              // rows U_i V
  const Matrix right = U * V.transpose();  // rows U_j V^T
  Matrix grad_u = Matrix::Zero(n, d);
  Matrix weighted = Matrix::Zero(n, d);
  for (const auto& e : graph_->edges()) {
    const auto i = static_cast<Eigen::Index>(e.src);
    const auto j = static_cast<Eigen::Index>(e.dst);
    const double residual = left.row(i).dot(U.row(j)) - to_int(e.sign);
    grad_u.row(i) += (2.0 * residual) * right.row(j);
    grad_u.row(j) += (2.0 * residual) * left.row(i);
    weighted.row(i) += residual * U.row(j);
  }
  Matrix grad_v = 2.0 * (U.transpose() * weighted);

  // Hinges: with c_k = dJ/dd_k and d = U V s, s = U^T 1, a = U^T c:
  //   dJ/dU = c (V s)^T + 1 (V^T a)^T,  dJ/dV = a s^T
  if (!active.gamma.empty() || !active.delta.empty()) {
    const Vector sums = U.colwise().sum().transpose();
    const Vector vs = V * sums;
    const Vector degree = U * vs;
    Vector c = Vector::Zero(n);
    auto accumulate = [&](const std::vector<HingePair>& pairs, const std::vector<std::size_t>& which,
                          double weight) {
      for (auto k : which) {
        const auto& hp = pairs.at(k);
        const auto i = static_cast<Eigen::Index>(hp.i);
        const auto j = static_cast<Eigen::Index>(hp.j);
        const double g = 2.0 * weight * (degree[j] - degree[i] + hp.margin);
        c[j] += g;
        c[i] -= g;
      }
    };
    if (!active.gamma.empty()) accumulate(plan_.optimism, active.gamma, hyper_.alpha);
    if (!active.delta.empty()) accumulate(plan_.pessimism, active.delta, hyper_.beta);
    const Vector a = U.transpose() * c;
    const Vector vta = V.transpose() * a;
    grad_u.noalias() += c * vs.transpose();
    grad_u.rowwise() += vta.transpose();
    grad_v.noalias() += a * sums.transpose();
  }

  grad_u += (2.0 * hyper_.lambda1) * U;
  grad_v += (2.0 * hyper_.lambda2) * V;
  return {std::move(grad_u), std::move(grad_v)};
}

}  // namespace slp
