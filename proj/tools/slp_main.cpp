// slp: command-line front end for personality scoring, training, prediction,
// cross-validated evaluation and synthetic data generation.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 runtime or training
// failure. Diagnostics go to stderr; results go to the named files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slp/config.hpp"
#include "slp/errors.hpp"
#include "slp/evaluation.hpp"
#include "slp/graph.hpp"
#include "slp/model.hpp"
#include "slp/personality.hpp"
#include "slp/synthgen.hpp"
#include "slp/trainer.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

template <typename... Args>
void note(const char* fmt, Args... args) {
  std::fputs("slp: ", stderr);
  if constexpr (sizeof...(Args) == 0) {
    std::fputs(fmt, stderr);
  } else {
    std::fprintf(stderr, fmt, args...);
  }
  std::fputc('\n', stderr);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

slp::RunConfig load_config(const std::string& path) {
  if (path.empty()) return slp::RunConfig{};
  return slp::load_run_config(path);
}

fs::path pick_path(const std::string& flag, const std::optional<fs::path>& from_config,
                   const char* what) {
  if (!flag.empty()) return flag;
  if (from_config) return *from_config;
  throw slp::ValidationError(std::string("no ") + what + " file given (flag or config key)");
}

// Graph and scores over a common user universe; missing score rows are zero.
struct Problem {
  slp::SignedGraph graph;
  slp::PersonalityScores scores;
};

Problem load_problem(const fs::path& graph_path, const fs::path& scores_path) {
  auto loaded = slp::load_signed_graph(graph_path);
  if (loaded.dropped_self_pairs > 0) {
    note("dropped %zu self-edges from %s", loaded.dropped_self_pairs, graph_path.c_str());
  }
  auto scores = slp::load_scores(scores_path);
  const std::size_t n = std::max(loaded.value.n(), scores.size());
  if (scores.size() < n) {
    note("scores cover %zu of %zu users; the rest score 0", scores.size(), n);
    scores.optimism.resize(n, 0.0);
    scores.pessimism.resize(n, 0.0);
  }
  return {loaded.value.with_user_count(n), std::move(scores)};
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  p += suffix;
  return p;
}

// --- personality -----------------------------------------------------------

struct PersonalityArgs {
  std::string scenario;
  std::string input;
  std::string output;
  int r_th = 3;
  double empty_score = 0.0;
};

int run_personality(const PersonalityArgs& a) {
  const slp::ScenarioConfig cfg{a.r_th, a.empty_score};
  cfg.validate();
  slp::PersonalityScores scores;
  if (a.scenario == "ratings") {
    scores = slp::scores_from_ratings(slp::load_ratings(a.input), cfg);
  } else {
    auto loaded = slp::load_opinions(a.input);
    if (loaded.dropped_self_pairs > 0) note("dropped %zu self-pairs", loaded.dropped_self_pairs);
    scores = slp::scores_from_opinions(loaded.value, cfg);
  }
  slp::save_scores(scores, a.output);
  note("wrote scores for %zu users to %s", scores.size(), a.output.c_str());
  return 0;
}

// --- train -------------------------------------------------------------------

struct TrainArgs {
  std::string graph;
  std::string scores;
  std::string config;
  std::string out;
  std::string trace;
  bool baseline = false;
};

int run_train(const TrainArgs& a) {
  const auto cfg = load_config(a.config);
  const auto graph_path = pick_path(a.graph, cfg.graph_file, "graph");
  slp::TrainResult result;
  if (a.baseline) {
    auto loaded = slp::load_signed_graph(graph_path);
    result = slp::train_mf_baseline(loaded.value, cfg.hyper);
  } else {
    const auto problem = load_problem(graph_path, pick_path(a.scores, cfg.scores_file, "scores"));
    result = slp::train(problem.graph, problem.scores, cfg.hyper, cfg.margins);
  }
  slp::save_model(result.model, a.out);
  const auto& r = result.report;
  note("%s: %zu iterations, %s, J %.6g -> %.6g, active hinges %zu/%zu", a.baseline ? "MF" : "SLP",
       r.iterations, r.converged ? "converged" : "iteration limit", r.objective_trace.front(),
       r.objective_trace.back(), r.active_optimism, r.active_pessimism);
  if (!a.trace.empty()) {
    auto out = open_output(a.trace);
    out << "iteration,objective\n";
    char buf[40];
    for (std::size_t k = 0; k < r.objective_trace.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", r.objective_trace[k]);
      out << k << ',' << buf << '\n';
    }
  }
  return 0;
}

// --- predict -----------------------------------------------------------------

struct PredictArgs {
  std::string model;
  std::string pairs;
  std::string out;
};

int run_predict(const PredictArgs& a) {
  const auto model = slp::load_model(a.model);
  const auto rows = slp::load_pairs(a.pairs);
  auto out = open_output(a.out);
  out << "src\tdst\tscore\tsign\n";
  std::size_t bad = 0;
  char buf[40];
  for (const auto& row : rows) {
    if (row.src >= model.n() || row.dst >= model.n()) {
      std::fprintf(stderr, "%s:%zu: pair (%zu, %zu) outside the model's %zu users\n",
                   a.pairs.c_str(), row.line, row.src, row.dst, model.n());
      ++bad;
      continue;
    }
    const double score = slp::predict_pair(model, row.src, row.dst);
    const int sign = score > 0.0 ? 1 : score < 0.0 ? -1 : 0;
    std::snprintf(buf, sizeof buf, "%.17g", score);
    out << row.src << '\t' << row.dst << '\t' << buf << '\t' << sign << '\n';
  }
  if (bad > 0) {
    note("%zu of %zu pairs rejected", bad, rows.size());
    return kExitInvalid;
  }
  return 0;
}

// --- evaluate ----------------------------------------------------------------

struct EvaluateArgs {
  std::string graph;
  std::string scores;
  std::string config;
  std::string experiment;
  std::string out;
  std::string means;
  unsigned jobs = 0;
};

void write_table(const slp::ResultTable& table, const fs::path& out, const fs::path& means) {
  {
    auto f = open_output(out);
    table.write_csv(f);
  }
  auto f = open_output(means);
  table.write_means_csv(f);
  note("wrote %zu rows to %s, means to %s", table.rows().size(), out.c_str(), means.c_str());
}

int run_evaluate(const EvaluateArgs& a) {
  const auto cfg = load_config(a.config);
  const auto problem = load_problem(pick_path(a.graph, cfg.graph_file, "graph"),
                                    pick_path(a.scores, cfg.scores_file, "scores"));
  const slp::ExperimentOptions options{a.jobs > 0 ? a.jobs : cfg.jobs};
  const fs::path means = a.means.empty() ? sibling(a.out, ".means.csv") : fs::path(a.means);

  if (a.experiment == "sweep") {
    const auto table = slp::sweep_training_fraction(problem.graph, problem.scores, cfg.hyper,
                                                    cfg.margins, cfg.split, cfg.fractions, options);
    write_table(table, a.out, means);
  } else if (a.experiment == "ablation") {
    const auto result = slp::personality_group_ablation(problem.graph, problem.scores, cfg.hyper,
                                                        cfg.margins, cfg.split, options);
    if (!result) {
      note("ablation skipped: every user has the same scores, so no groups can be formed");
      return 0;
    }
    note("groups: %zu strong, %zu indifferent", result->groups.strong_count(),
         result->groups.strong.size() - result->groups.strong_count());
    write_table(result->table, a.out, means);
  } else {
    const auto cells = slp::sensitivity_grid(problem.graph, problem.scores, cfg.hyper, cfg.margins,
                                             cfg.split, cfg.grid, options);
    auto f = open_output(a.out);
    slp::write_sensitivity_csv(cells, f);
    note("wrote %zu grid cells to %s", cells.size(), a.out.c_str());
  }
  return 0;
}

// --- synth -------------------------------------------------------------------

struct SynthArgs {
  std::string config;
  std::string prefix;
};

int run_synth(const SynthArgs& a) {
  const auto cfg = load_config(a.config);
  const auto data = slp::generate(cfg.synth);
  const fs::path prefix = a.prefix;
  slp::save_signed_graph(data.graph, prefix.string() + ".graph.tsv");
  slp::save_ratings(data.ratings, prefix.string() + ".ratings.tsv");
  slp::save_scores(data.truth, prefix.string() + ".truth.tsv");
  note("generated %zu users, %zu links (%zu positive), %zu ratings", data.graph.n(),
       data.graph.edge_count(), data.graph.positive_count(), data.ratings.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed link prediction with personality-regularized matrix factorization", "slp"};
  app.set_version_flag("--version", "slp 0.1.0");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  PersonalityArgs pa;
  auto* personality = app.add_subcommand("personality", "Compute optimism/pessimism scores");
  personality->add_option("--scenario", pa.scenario, "Feedback kind")
      ->required()
      ->check(CLI::IsMember({"ratings", "opinions"}));
  personality->add_option("--input", pa.input, "Ratings or opinion-count TSV")->required();
  personality->add_option("--r-th", pa.r_th, "Rating threshold; ratings <= r-th are low")
      ->capture_default_str();
  personality->add_option("--empty-score", pa.empty_score, "Score for an empty reference set")
      ->capture_default_str();
  personality->add_option("--output", pa.output, "Scores TSV to write")->required();

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Fit a factor model");
  train->add_option("--graph", ta.graph, "Signed edge TSV (default: config key 'graph')");
  train->add_option("--scores", ta.scores, "Scores TSV (default: config key 'scores')");
  train->add_option("--config", ta.config, "key = value run configuration");
  train->add_option("--out", ta.out, "Model checkpoint to write")->required();
  train->add_option("--trace", ta.trace, "Optional CSV of the objective per iteration");
  train->add_flag("--baseline-mf", ta.baseline, "Train plain factorization without personality terms");

  PredictArgs pr;
  auto* predict = app.add_subcommand("predict", "Score user pairs with a trained model");
  predict->add_option("--model", pr.model, "Model checkpoint")->required();
  predict->add_option("--pairs", pr.pairs, "TSV of src, dst pairs")->required();
  predict->add_option("--out", pr.out, "TSV of src, dst, score, sign")->required();

  EvaluateArgs ea;
  auto* evaluate = app.add_subcommand("evaluate", "Run a cross-validated experiment");
  evaluate->add_option("--graph", ea.graph, "Signed edge TSV (default: config key 'graph')");
  evaluate->add_option("--scores", ea.scores, "Scores TSV (default: config key 'scores')");
  evaluate->add_option("--config", ea.config, "key = value run configuration");
  evaluate->add_option("--experiment", ea.experiment, "Which experiment")
      ->required()
      ->check(CLI::IsMember({"sweep", "ablation", "sensitivity"}));
  evaluate->add_option("--out", ea.out, "Result CSV")->required();
  evaluate->add_option("--means", ea.means, "Means CSV (default: <out>.means.csv)");
  evaluate->add_option("--jobs", ea.jobs, "Worker threads (default: config key 'jobs')")
      ->check(CLI::PositiveNumber);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic signed network");
  synth->add_option("--config", sa.config, "key = value configuration (synth.* keys)");
  synth->add_option("--out-prefix", sa.prefix, "Writes PREFIX.graph.tsv, .ratings.tsv, .truth.tsv")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*personality) return run_personality(pa);
    if (*train) return run_train(ta);
    if (*predict) return run_predict(pr);
    if (*evaluate) return run_evaluate(ea);
    if (*synth) return run_synth(sa);
  } catch (const slp::ValidationError& e) {
    note("error: %s", e.what());
    return kExitInvalid;
  } catch (const slp::TrainingError& e) {
    note("training failed: %s", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    note("error: %s", e.what());
    return kExitRuntime;
  }
  return kExitInvalid;
}
