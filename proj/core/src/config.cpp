#include "slp/config.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

#include "slp/errors.hpp"
#include "text_io.hpp"

namespace slp {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

struct Context {
  const std::string& source;
  std::size_t line_no;

  template <typename T>
  T number(std::string_view v) const {
    return detail::parse_number<T>(v, source, line_no);
  }

  bool boolean(std::string_view v) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    detail::fail_line(source, line_no, "expected true or false, got '" + std::string(v) + "'");
  }

  std::vector<MarginTier> tiers(std::string_view v) const {
    std::vector<MarginTier> out;
    if (v.empty()) return out;
    for (auto item : split(v, ',')) {
      const auto kv = split(item, ':');
      if (kv.size() != 2) detail::fail_line(source, line_no, "margin tiers are 'cutoff:margin'");
      out.push_back({number<std::size_t>(kv[0]), number<double>(kv[1])});
    }
    return out;
  }

  template <typename T>
  std::vector<T> list(std::string_view v) const {
    std::vector<T> out;
    for (auto item : split(v, ',')) out.push_back(number<T>(item));
    return out;
  }

  std::vector<std::pair<double, double>> cells(std::string_view v) const {
    std::vector<std::pair<double, double>> out;
    for (auto item : split(v, ',')) {
      const auto ab = split(item, ':');
      if (ab.size() != 2) detail::fail_line(source, line_no, "grid cells are 'alpha:beta'");
      out.emplace_back(number<double>(ab[0]), number<double>(ab[1]));
    }
    return out;
  }
};

using Setter = std::function<void(RunConfig&, const Context&, std::string_view)>;

template <typename T>
Setter set_number(T RunConfig::*field) {
  return [field](RunConfig& c, const Context& ctx, std::string_view v) { c.*field = ctx.number<T>(v); };
}

template <typename S, typename T>
Setter set_nested(S RunConfig::*outer, T S::*field) {
  return [outer, field](RunConfig& c, const Context& ctx, std::string_view v) {
    (c.*outer).*field = ctx.number<T>(v);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"lambda1", set_nested(&RunConfig::hyper, &Hyperparams::lambda1)},
      {"lambda2", set_nested(&RunConfig::hyper, &Hyperparams::lambda2)},
      {"alpha", set_nested(&RunConfig::hyper, &Hyperparams::alpha)},
      {"beta", set_nested(&RunConfig::hyper, &Hyperparams::beta)},
      {"d", set_nested(&RunConfig::hyper, &Hyperparams::dim)},
      {"t_o", set_nested(&RunConfig::hyper, &Hyperparams::t_o)},
      {"t_p", set_nested(&RunConfig::hyper, &Hyperparams::t_p)},
      {"lr_u", set_nested(&RunConfig::hyper, &Hyperparams::lr_u)},
      {"lr_v", set_nested(&RunConfig::hyper, &Hyperparams::lr_v)},
      {"max_iter", set_nested(&RunConfig::hyper, &Hyperparams::max_iter)},
      {"tol", set_nested(&RunConfig::hyper, &Hyperparams::tol)},
      {"seed", set_nested(&RunConfig::hyper, &Hyperparams::seed)},
      {"backtracking",
       [](RunConfig& c, const Context& ctx, std::string_view v) { c.hyper.backtracking = ctx.boolean(v); }},
      {"margin.gamma",
       [](RunConfig& c, const Context& ctx, std::string_view v) { c.margins.gamma = ctx.tiers(v); }},
      {"margin.delta",
       [](RunConfig& c, const Context& ctx, std::string_view v) { c.margins.delta = ctx.tiers(v); }},
      {"margin.default", set_nested(&RunConfig::margins, &MarginRule::fallback)},
      {"split.folds", set_nested(&RunConfig::split, &SplitPlan::folds)},
      {"split.train_percent", set_nested(&RunConfig::split, &SplitPlan::train_percent)},
      {"split.seed", set_nested(&RunConfig::split, &SplitPlan::seed)},
      {"split.fractions",
       [](RunConfig& c, const Context& ctx, std::string_view v) { c.fractions = ctx.list<int>(v); }},
      {"sensitivity.weights",
       [](RunConfig& c, const Context& ctx, std::string_view v) {
         c.grid = full_grid(ctx.list<double>(v));
       }},
      {"sensitivity.grid",
       [](RunConfig& c, const Context& ctx, std::string_view v) { c.grid = ctx.cells(v); }},
      {"scenario.r_th", set_nested(&RunConfig::scenario, &ScenarioConfig::rating_threshold)},
      {"scenario.empty_score", set_nested(&RunConfig::scenario, &ScenarioConfig::empty_set_score)},
      {"synth.n", set_nested(&RunConfig::synth, &SynthConfig::n)},
      {"synth.frac_strong", set_nested(&RunConfig::synth, &SynthConfig::frac_strong)},
      {"synth.edge_density", set_nested(&RunConfig::synth, &SynthConfig::edge_density)},
      {"synth.pos_boost", set_nested(&RunConfig::synth, &SynthConfig::pos_boost)},
      {"synth.neg_boost", set_nested(&RunConfig::synth, &SynthConfig::neg_boost)},
      {"synth.d_true", set_nested(&RunConfig::synth, &SynthConfig::d_true)},
      {"synth.noise", set_nested(&RunConfig::synth, &SynthConfig::noise)},
      {"synth.seed", set_nested(&RunConfig::synth, &SynthConfig::seed)},
      {"synth.sign_bias", set_nested(&RunConfig::synth, &SynthConfig::sign_bias)},
      {"synth.latent_scale", set_nested(&RunConfig::synth, &SynthConfig::latent_scale)},
      {"synth.items_per_side", set_nested(&RunConfig::synth, &SynthConfig::items_per_side)},
      {"synth.ratings_per_side", set_nested(&RunConfig::synth, &SynthConfig::ratings_per_side)},
      {"jobs", set_number(&RunConfig::jobs)},
      {"graph",
       [](RunConfig& c, const Context&, std::string_view v) { c.graph_file = std::string(v); }},
      {"scores",
       [](RunConfig& c, const Context&, std::string_view v) { c.scores_file = std::string(v); }},
  };
  return table;
}

std::string join_tiers(const std::vector<MarginTier>& tiers) {
  std::string out;
  for (const auto& t : tiers) {
    if (!out.empty()) out += ',';
    out += std::to_string(t.min_rank_gap) + ':' + detail::format_double(t.margin);
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  hyper.validate();
  margins.validate();
  split.validate();
  scenario.validate();
  synth.validate();
  if (fractions.empty()) throw ValidationError("split.fractions must not be empty");
  for (int x : fractions) {
    if (x < 1 || x > 100) throw ValidationError("training fractions must lie in [1, 100]");
  }
  for (const auto& [a, b] : grid) {
    if (!(a >= 0.0) || !(b >= 0.0)) throw ValidationError("grid weights must be non-negative");
  }
  if (jobs < 1) throw ValidationError("jobs must be >= 1");
}

RunConfig parse_run_config(std::istream& in, const std::string& source) {
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) detail::fail_line(source, line_no, "expected key = value");
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": unknown key '" +
                            std::string(key) + "'");
    }
    it->second(config, Context{source, line_no}, value);
  }
  config.validate();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return parse_run_config(in, path.string());
}

void write_run_config(const RunConfig& c, std::ostream& out) {
  using detail::format_double;
  const auto& h = c.hyper;
  out << "lambda1 = " << format_double(h.lambda1) << '\n'
      << "lambda2 = " << format_double(h.lambda2) << '\n'
      << "alpha = " << format_double(h.alpha) << '\n'
      << "beta = " << format_double(h.beta) << '\n'
      << "d = " << h.dim << '\n'
      << "t_o = " << format_double(h.t_o) << '\n'
      << "t_p = " << format_double(h.t_p) << '\n'
      << "lr_u = " << format_double(h.lr_u) << '\n'
      << "lr_v = " << format_double(h.lr_v) << '\n'
      << "max_iter = " << h.max_iter << '\n'
      << "tol = " << format_double(h.tol) << '\n'
      << "seed = " << h.seed << '\n'
      << "backtracking = " << (h.backtracking ? "true" : "false") << '\n'
      << "margin.gamma = " << join_tiers(c.margins.gamma) << '\n'
      << "margin.delta = " << join_tiers(c.margins.delta) << '\n'
      << "margin.default = " << format_double(c.margins.fallback) << '\n'
      << "split.folds = " << c.split.folds << '\n'
      << "split.train_percent = " << c.split.train_percent << '\n'
      << "split.seed = " << c.split.seed << '\n';
  out << "split.fractions = ";
  for (std::size_t k = 0; k < c.fractions.size(); ++k) out << (k ? "," : "") << c.fractions[k];
  out << "\nsensitivity.grid = ";
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    out << (k ? "," : "") << format_double(c.grid[k].first) << ':' << format_double(c.grid[k].second);
  }
  const auto& s = c.synth;
  out << '\n'
      << "scenario.r_th = " << c.scenario.rating_threshold << '\n'
      << "scenario.empty_score = " << format_double(c.scenario.empty_set_score) << '\n'
      << "synth.n = " << s.n << '\n'
      << "synth.frac_strong = " << format_double(s.frac_strong) << '\n'
      << "synth.edge_density = " << format_double(s.edge_density) << '\n'
      << "synth.pos_boost = " << format_double(s.pos_boost) << '\n'
      << "synth.neg_boost = " << format_double(s.neg_boost) << '\n'
      << "synth.d_true = " << s.d_true << '\n'
      << "synth.noise = " << format_double(s.noise) << '\n'
      << "synth.seed = " << s.seed << '\n'
      << "synth.sign_bias = " << format_double(s.sign_bias) << '\n'
      << "synth.latent_scale = " << format_double(s.latent_scale) << '\n'
      << "synth.items_per_side = " << s.items_per_side << '\n'
      << "synth.ratings_per_side = " << s.ratings_per_side << '\n'
      << "jobs = " << c.jobs << '\n';
  if (c.graph_file) out << "graph = " << c.graph_file->string() << '\n';
  if (c.scores_file) out << "scores = " << c.scores_file->string() << '\n';
}

}  // namespace slp
