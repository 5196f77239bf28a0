#include "slp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "parallel.hpp"
#include "slp/errors.hpp"
#include "slp/trainer.hpp"

namespace slp {

namespace {

constexpr std::uint64_t kTrainSampleSalt = 0x7261696eULL;
constexpr std::uint64_t kRandomSalt = 0x72616e64ULL;
constexpr std::uint64_t kModelSalt = 0x6d6f646cULL;

std::string four_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

struct TaskKey {
  int x = 0;
  std::size_t fold = 0;
};

}  // namespace

void SplitPlan::validate() const {
  if (folds < 2) throw ValidationError("need at least 2 folds");
  if (train_percent < 1 || train_percent > 100) {
    throw ValidationError("training fraction must be a percentage in [1, 100]");
  }
}

std::vector<Fold> make_splits(const SignedGraph& graph, const SplitPlan& plan) {
  plan.validate();
  std::vector<SignedEdge> positives;
  std::vector<SignedEdge> negatives;
  for (const auto& e : graph.edges()) (e.sign == Sign::positive ? positives : negatives).push_back(e);
  if (positives.size() < plan.folds || negatives.size() < plan.folds) {
    throw ValidationError("each sign class needs at least " + std::to_string(plan.folds) +
                          " links for stratified folds (have " + std::to_string(positives.size()) +
                          " positive, " + std::to_string(negatives.size()) + " negative)");
  }

  std::mt19937_64 rng(plan.seed);
  std::shuffle(positives.begin(), positives.end(), rng);
  std::shuffle(negatives.begin(), negatives.end(), rng);

  std::vector<Fold> folds(plan.folds);
  for (std::size_t a = 0; a < plan.folds; ++a) {
    auto& fold = folds[a];
    std::vector<SignedEdge> train;
    auto deal = [&](const std::vector<SignedEdge>& cls, std::size_t& test_count,
                    std::size_t& train_count) {
      std::vector<SignedEdge> rest;
      for (std::size_t k = 0; k < cls.size(); ++k) {
        if (k % plan.folds == a) {
          fold.test.push_back(cls[k]);
          ++test_count;
        } else {
          rest.push_back(cls[k]);
        }
      }
      std::mt19937_64 sampler(detail::mix_seed(plan.seed ^ kTrainSampleSalt, a));
      std::shuffle(rest.begin(), rest.end(), sampler);
      const std::size_t keep =
          (rest.size() * static_cast<std::size_t>(plan.train_percent) + 50) / 100;
      train.insert(train.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(keep));
      train_count = keep;
    };
    deal(positives, fold.test_positive, fold.train_positive);
    deal(negatives, fold.test_negative, fold.train_negative);
    std::sort(fold.test.begin(), fold.test.end(), [](const auto& l, const auto& r) {
      return std::pair(l.src, l.dst) < std::pair(r.src, r.dst);
    });
    fold.train = SignedGraph(graph.n(), std::move(train));
  }
  return folds;
}

double auc(std::span<const ScoredLabel> scored) {
  std::size_t n_pos = 0;
  for (const auto& s : scored) {
    if (std::isnan(s.score)) throw ValidationError("AUC input contains NaN scores");
    if (s.label == Sign::positive) ++n_pos;
  }
  const std::size_t n_neg = scored.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw ValidationError("AUC needs both positive and negative labels");

  std::vector<std::size_t> order(scored.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scored[a].score < scored[b].score; });

  // Twice the mid-rank keeps everything integral: a tie block occupying
  // 1-based ranks first+1 .. last has doubled mid-rank first + last + 1.
  unsigned long long doubled_rank_sum = 0;
  std::size_t first = 0;
  while (first < order.size()) {
    std::size_t last = first + 1;
    while (last < order.size() && scored[order[last]].score == scored[order[first]].score) ++last;
    const unsigned long long doubled_mid = first + last + 1;
    for (std::size_t k = first; k < last; ++k) {
      if (scored[order[k]].label == Sign::positive) doubled_rank_sum += doubled_mid;
    }
    first = last;
  }
  const unsigned long long doubled_u =
      doubled_rank_sum - static_cast<unsigned long long>(n_pos) * (n_pos + 1);
  return static_cast<double>(doubled_u) /
         (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

FoldResult score_links(std::span<const SignedEdge> test, auto&& score_of) {
  std::vector<ScoredLabel> scored;
  scored.reserve(test.size());
  FoldResult result;
  for (const auto& e : test) {
    scored.push_back({score_of(e), e.sign});
    (e.sign == Sign::positive ? result.test_positive : result.test_negative)++;
  }
  result.auc = auc(scored);
  return result;
}

}  // namespace

FoldResult evaluate_model(const FactorModel& model, std::span<const SignedEdge> test) {
  return score_links(test, [&model](const SignedEdge& e) { return predict_pair(model, e.src, e.dst); });
}

FoldResult random_baseline(std::span<const SignedEdge> test, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  return score_links(test, [&](const SignedEdge&) { return unif(rng); });
}

double ResultTable::mean(const std::string& method, int x) const {
  const auto values = aucs(method, x);
  if (values.empty()) throw std::out_of_range("no results for " + method + " at x=" + std::to_string(x));
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::vector<double> ResultTable::aucs(const std::string& method, int x) const {
  std::vector<double> values;
  for (const auto& r : rows_) {
    if (r.method == method && r.x == x) values.push_back(r.auc);
  }
  return values;
}

void ResultTable::write_csv(std::ostream& out) const {
  out << "method,x,fold,auc\n";
  char buf[32];
  for (const auto& r : rows_) {
    std::snprintf(buf, sizeof buf, "%.17g", r.auc);
    out << r.method << ',' << r.x << ',' << r.fold << ',' << buf << '\n';
  }
}

void ResultTable::write_means_csv(std::ostream& out) const {
  out << "method,x,mean_auc\n";
  std::vector<std::pair<std::string, int>> seen;
  for (const auto& r : rows_) {
    const std::pair key(r.method, r.x);
    if (std::find(seen.begin(), seen.end(), key) == seen.end()) seen.push_back(key);
  }
  for (const auto& [method, x] : seen) {
    out << method << ',' << x << ',' << four_decimals(mean(method, x)) << '\n';
  }
}

std::uint64_t fold_seed(std::uint64_t base, std::size_t fold) {
  return detail::mix_seed(base ^ kModelSalt, fold);
}

ResultTable sweep_training_fraction(const SignedGraph& graph, const PersonalityScores& scores,
                                    const Hyperparams& hyper, const MarginRule& rule,
                                    const SplitPlan& plan, std::span<const int> fractions,
                                    const ExperimentOptions& options) {
  std::vector<TaskKey> tasks;
  std::vector<std::vector<Fold>> splits;
  for (int x : fractions) {
    SplitPlan p = plan;
    p.train_percent = x;
    splits.push_back(make_splits(graph, p));
    for (std::size_t a = 0; a < p.folds; ++a) tasks.push_back({x, a});
  }

  struct Outcome {
    double slp = 0.0, mf = 0.0, random = 0.0;
  };
  std::vector<Outcome> outcomes(tasks.size());
  detail::parallel_for(tasks.size(), options.jobs, [&](std::size_t t) {
    const auto& key = tasks[t];
    const std::size_t xi = t / plan.folds;
    const Fold& fold = splits[xi][key.fold];
    Hyperparams h = hyper;
    h.seed = fold_seed(hyper.seed, key.fold);
    const auto slp = train(fold.train, scores, h, rule);
    const auto mf = train_mf_baseline(fold.train, h);
    outcomes[t].slp = evaluate_model(slp.model, fold.test).auc;
    outcomes[t].mf = evaluate_model(mf.model, fold.test).auc;
    outcomes[t].random = random_baseline(fold.test, detail::mix_seed(plan.seed ^ kRandomSalt, key.fold)).auc;
  });

  ResultTable table;
  for (const char* method : {"SLP", "MF", "Random"}) {
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      const std::string m = method;
      const double value = m == "SLP" ? outcomes[t].slp : m == "MF" ? outcomes[t].mf : outcomes[t].random;
      table.add({m, tasks[t].x, tasks[t].fold, value});
    }
  }
  return table;
}

std::size_t PersonalityGroups::strong_count() const {
  return static_cast<std::size_t>(std::count(strong.begin(), strong.end(), true));
}

std::optional<PersonalityGroups> two_means(const PersonalityScores& scores) {
  scores.validate();
  const std::size_t n = scores.size();
  auto point = [&scores](std::size_t i) {
    return std::array<double, 2>{scores.optimism[i], scores.pessimism[i]};
  };
  auto dist2 = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
  };

  double best = 0.0;
  std::size_t seed_a = 0;
  std::size_t seed_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist2(point(i), point(j));
      if (d > best) {
        best = d;
        seed_a = i;
        seed_b = j;
      }
    }
  }
  if (best == 0.0) return std::nullopt;

  std::array<std::array<double, 2>, 2> centroid{point(seed_a), point(seed_b)};
  std::vector<int> assign(n, -1);
  std::size_t iterations = 0;
  for (; iterations < 100; ++iterations) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int c = dist2(point(i), centroid[1]) < dist2(point(i), centroid[0]) ? 1 : 0;
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    if (!changed) break;
    std::array<std::array<double, 2>, 2> sum{};
    std::array<std::size_t, 2> count{};
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = point(i);
      sum[assign[i]][0] += p[0];
      sum[assign[i]][1] += p[1];
      ++count[assign[i]];
    }
    for (int c = 0; c < 2; ++c) {
      // an emptied cluster keeps its previous centroid
      if (count[c] > 0) {
        centroid[c] = {sum[c][0] / static_cast<double>(count[c]),
                       sum[c][1] / static_cast<double>(count[c])};
      }
    }
  }

  auto norm2 = [](const std::array<double, 2>& c) { return c[0] * c[0] + c[1] * c[1]; };
  const int strong_cluster = norm2(centroid[1]) > norm2(centroid[0]) ? 1 : 0;
  PersonalityGroups groups;
  groups.strong.resize(n);
  for (std::size_t i = 0; i < n; ++i) groups.strong[i] = assign[i] == strong_cluster;
  groups.strong_centroid = centroid[strong_cluster];
  groups.indifferent_centroid = centroid[1 - strong_cluster];
  groups.iterations = iterations;
  return groups;
}

PersonalityScores zero_scores(const PersonalityScores& scores, const std::vector<bool>& which) {
  if (which.size() != scores.size()) throw ValidationError("group mask does not match score count");
  PersonalityScores out = scores;
  for (std::size_t i = 0; i < which.size(); ++i) {
    if (which[i]) {
      out.optimism[i] = 0.0;
      out.pessimism[i] = 0.0;
    }
  }
  return out;
}

std::optional<AblationResult> personality_group_ablation(const SignedGraph& graph,
                                                         const PersonalityScores& scores,
                                                         const Hyperparams& hyper,
                                                         const MarginRule& rule,
                                                         const SplitPlan& plan,
                                                         const ExperimentOptions& options) {
  auto groups = two_means(scores);
  if (!groups) return std::nullopt;

  std::vector<bool> indifferent(groups->strong.size());
  for (std::size_t i = 0; i < indifferent.size(); ++i) indifferent[i] = !groups->strong[i];
  const std::array<std::pair<const char*, PersonalityScores>, 3> variants{{
      {"SLP-S", zero_scores(scores, indifferent)},
      {"SLP-I", zero_scores(scores, groups->strong)},
      {"SLP-SI", scores},
  }};

  SplitPlan full = plan;
  full.train_percent = 100;
  const auto folds = make_splits(graph, full);
  std::vector<double> aucs(variants.size() * folds.size());
  detail::parallel_for(aucs.size(), options.jobs, [&](std::size_t t) {
    const std::size_t v = t / folds.size();
    const std::size_t a = t % folds.size();
    Hyperparams h = hyper;
    h.seed = fold_seed(hyper.seed, a);
    const auto fit = train(folds[a].train, variants[v].second, h, rule);
    aucs[t] = evaluate_model(fit.model, folds[a].test).auc;
  });

  AblationResult result{std::move(*groups), {}};
  for (std::size_t t = 0; t < aucs.size(); ++t) {
    result.table.add({variants[t / folds.size()].first, 100, t % folds.size(), aucs[t]});
  }
  return result;
}

std::vector<std::pair<double, double>> full_grid(std::span<const double> weights) {
  std::vector<std::pair<double, double>> grid;
  for (double a : weights)
    for (double b : weights) grid.emplace_back(a, b);
  return grid;
}

std::vector<SensitivityCell> sensitivity_grid(const SignedGraph& graph,
                                              const PersonalityScores& scores,
                                              const Hyperparams& hyper, const MarginRule& rule,
                                              const SplitPlan& plan,
                                              std::span<const std::pair<double, double>> grid,
                                              const ExperimentOptions& options) {
  SplitPlan full = plan;
  full.train_percent = 100;
  const auto folds = make_splits(graph, full);
  std::vector<SensitivityCell> cells(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    cells[c].alpha = grid[c].first;
    cells[c].beta = grid[c].second;
    cells[c].fold_aucs.assign(folds.size(), 0.0);
  }
  detail::parallel_for(grid.size() * folds.size(), options.jobs, [&](std::size_t t) {
    const std::size_t c = t / folds.size();
    const std::size_t a = t % folds.size();
    Hyperparams h = hyper;
    h.alpha = grid[c].first;
    h.beta = grid[c].second;
    h.seed = fold_seed(hyper.seed, a);
    const auto fit = train(folds[a].train, scores, h, rule);
    cells[c].fold_aucs[a] = evaluate_model(fit.model, folds[a].test).auc;
  });
  for (auto& cell : cells) {
    double sum = 0.0;
    for (double v : cell.fold_aucs) sum += v;
    cell.mean_auc = sum / static_cast<double>(cell.fold_aucs.size());
  }
  return cells;
}

void write_sensitivity_csv(std::span<const SensitivityCell> cells, std::ostream& out) {
  out << "alpha,beta,auc\n";
  for (const auto& cell : cells) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g,%g,", cell.alpha, cell.beta);
    out << buf << four_decimals(cell.mean_auc) << '\n';
  }
}

}  // namespace slp
