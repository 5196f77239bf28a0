#include "slp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "slp/errors.hpp"
#include "text_io.hpp"

namespace slp {

namespace {

bool by_pair(const SignedEdge& a, const SignedEdge& b) {
  return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
}

template <typename Row>
std::vector<std::size_t> offsets_by(std::span<const Row> rows, std::size_t n,
                                    UserIndex Row::*key) {
  std::vector<std::size_t> offsets(n + 1, 0);
  for (const auto& r : rows) ++offsets[r.*key + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  return offsets;
}

}  // namespace

SignedGraph::SignedGraph(std::size_t n, std::vector<SignedEdge> edges)
    : n_(n), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end(), by_pair);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    if (e.src >= n_ || e.dst >= n_) {
      throw ValidationError("edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
                            ") outside user range [0, " + std::to_string(n_) + ")");
    }
    if (e.src == e.dst) throw ValidationError("self-edge at user " + std::to_string(e.src));
    if (e.sign != Sign::positive && e.sign != Sign::negative) {
      throw ValidationError("edge sign must be +1 or -1");
    }
    if (k > 0 && edges_[k - 1].src == e.src && edges_[k - 1].dst == e.dst) {
      throw ValidationError("duplicate edge (" + std::to_string(e.src) + ", " +
                            std::to_string(e.dst) + ")");
    }
    if (e.sign == Sign::positive) ++positives_;
  }
}

int SignedGraph::sign(UserIndex i, UserIndex j) const {
  const SignedEdge probe{i, j, Sign::positive};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), probe, by_pair);
  if (it == edges_.end() || it->src != i || it->dst != j) return 0;
  return to_int(it->sign);
}

SignedGraph SignedGraph::with_user_count(std::size_t n) const {
  if (n < n_) throw ValidationError("cannot shrink user universe");
  SignedGraph copy = *this;
  copy.n_ = n;
  return copy;
}

RatingsTable::RatingsTable(std::size_t n_users, std::size_t n_items, std::vector<Rating> ratings)
    : n_users_(n_users), n_items_(n_items) {
  // stable so that the last line for a (user, item) pair wins below
  std::stable_sort(ratings.begin(), ratings.end(), [](const Rating& a, const Rating& b) {
    return std::pair(a.user, a.item) < std::pair(b.user, b.item);
  });
  for (const auto& r : ratings) {
    if (r.user >= n_users_ || r.item >= n_items_) {
      throw ValidationError("rating (" + std::to_string(r.user) + ", " + std::to_string(r.item) +
                            ") outside table bounds");
    }
    if (r.value < 1 || r.value > 5) {
      throw ValidationError("rating " + std::to_string(r.value) + " outside [1, 5]");
    }
    if (!ratings_.empty() && ratings_.back().user == r.user && ratings_.back().item == r.item) {
      ratings_.back() = r;
    } else {
      ratings_.push_back(r);
    }
  }
  user_offsets_ = offsets_by<Rating>(ratings_, n_users_, &Rating::user);

  std::vector<double> sums(n_items_, 0.0);
  std::vector<std::size_t> counts(n_items_, 0);
  for (const auto& r : ratings_) {
    sums[r.item] += r.value;
    ++counts[r.item];
  }
  item_means_.resize(n_items_);
  for (std::size_t k = 0; k < n_items_; ++k) {
    if (counts[k] > 0) item_means_[k] = sums[k] / static_cast<double>(counts[k]);
  }
}

std::span<const Rating> RatingsTable::ratings_of(UserIndex user) const {
  if (user >= n_users_) return {};
  return std::span<const Rating>(ratings_).subspan(
      user_offsets_[user], user_offsets_[user + 1] - user_offsets_[user]);
}

OpinionCounts::OpinionCounts(std::size_t n, std::vector<OpinionEntry> entries) : n_(n) {
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  });
  for (const auto& e : entries) {
    if (e.src >= n_ || e.dst >= n_) {
      throw ValidationError("opinion pair (" + std::to_string(e.src) + ", " +
                            std::to_string(e.dst) + ") outside user range");
    }
    if (e.src == e.dst) throw ValidationError("self opinion at user " + std::to_string(e.src));
    if (!entries_.empty() && entries_.back().src == e.src && entries_.back().dst == e.dst) {
      entries_.back().positive += e.positive;
      entries_.back().negative += e.negative;
    } else {
      entries_.push_back(e);
    }
  }
  src_offsets_ = offsets_by<OpinionEntry>(entries_, n_, &OpinionEntry::src);
}

std::span<const OpinionEntry> OpinionCounts::entries_of(UserIndex src) const {
  if (src >= n_) return {};
  return std::span<const OpinionEntry>(entries_).subspan(
      src_offsets_[src], src_offsets_[src + 1] - src_offsets_[src]);
}

PersonalityScores::PersonalityScores(std::vector<double> o, std::vector<double> p)
    : optimism(std::move(o)), pessimism(std::move(p)) {
  validate();
}

void PersonalityScores::validate() const {
  if (optimism.size() != pessimism.size()) {
    throw ValidationError("optimism and pessimism vectors differ in length");
  }
  for (std::size_t i = 0; i < optimism.size(); ++i) {
    const double o = optimism[i];
    const double p = pessimism[i];
    if (!(o >= 0.0 && o <= 1.0) || !(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("scores of user " + std::to_string(i) + " outside [0, 1]");
    }
  }
}

Loaded<SignedGraph> load_signed_graph(const std::filesystem::path& path,
                                      std::optional<std::size_t> n) {
  std::map<std::pair<UserIndex, UserIndex>, Sign> latest;
  std::size_t dropped = 0;
  std::size_t max_index = 0;
  bool any = false;
  detail::for_each_row(path, 3, [&](std::size_t line_no, const auto& f) {
    const auto src = detail::parse_number<std::int64_t>(f[0], path, line_no);
    const auto dst = detail::parse_number<std::int64_t>(f[1], path, line_no);
    const auto sign = detail::parse_number<std::int64_t>(f[2], path, line_no);
    if (src < 0 || dst < 0) detail::fail_line(path, line_no, "negative user index");
    if (sign != 1 && sign != -1) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": sign " +
                            std::to_string(sign) + " is not 1 or -1");
    }
    const auto i = static_cast<UserIndex>(src);
    const auto j = static_cast<UserIndex>(dst);
    max_index = std::max({max_index, i, j});
    any = true;
    if (i == j) {
      ++dropped;
      return;
    }
    latest[{i, j}] = sign > 0 ? Sign::positive : Sign::negative;
  });

  const std::size_t seen = any ? max_index + 1 : 0;
  if (n && *n < seen) {
    throw ValidationError(path.string() + ": index " + std::to_string(max_index) +
                          " exceeds user count " + std::to_string(*n));
  }
  std::vector<SignedEdge> edges;
  edges.reserve(latest.size());
  for (const auto& [key, sign] : latest) edges.push_back({key.first, key.second, sign});
  return {SignedGraph(n.value_or(seen), std::move(edges)), dropped};
}

void save_signed_graph(const SignedGraph& graph, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (const auto& e : graph.edges()) {
    out << e.src << '\t' << e.dst << '\t' << to_int(e.sign) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

RatingsTable load_ratings(const std::filesystem::path& path) {
  std::vector<Rating> ratings;
  std::size_t users = 0;
  std::size_t items = 0;
  detail::for_each_row(path, 3, [&](std::size_t line_no, const auto& f) {
    const auto user = detail::parse_number<std::int64_t>(f[0], path, line_no);
    const auto item = detail::parse_number<std::int64_t>(f[1], path, line_no);
    const auto value = detail::parse_number<std::int64_t>(f[2], path, line_no);
    if (user < 0 || item < 0) detail::fail_line(path, line_no, "negative index");
    if (value < 1 || value > 5) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": rating " +
                            std::to_string(value) + " outside [1, 5]");
    }
    ratings.push_back({static_cast<UserIndex>(user), static_cast<ItemIndex>(item),
                       static_cast<int>(value)});
    users = std::max(users, static_cast<std::size_t>(user) + 1);
    items = std::max(items, static_cast<std::size_t>(item) + 1);
  });
  return RatingsTable(users, items, std::move(ratings));
}

void save_ratings(const RatingsTable& table, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (const auto& r : table.ratings()) out << r.user << '\t' << r.item << '\t' << r.value << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Loaded<OpinionCounts> load_opinions(const std::filesystem::path& path) {
  std::vector<OpinionEntry> entries;
  std::size_t n = 0;
  std::size_t dropped = 0;
  detail::for_each_row(path, 4, [&](std::size_t line_no, const auto& f) {
    const auto src = detail::parse_number<std::int64_t>(f[0], path, line_no);
    const auto dst = detail::parse_number<std::int64_t>(f[1], path, line_no);
    const auto pos = detail::parse_number<std::int64_t>(f[2], path, line_no);
    const auto neg = detail::parse_number<std::int64_t>(f[3], path, line_no);
    if (src < 0 || dst < 0) detail::fail_line(path, line_no, "negative user index");
    if (pos < 0 || neg < 0) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": opinion counts must be non-negative");
    }
    n = std::max({n, static_cast<std::size_t>(src) + 1, static_cast<std::size_t>(dst) + 1});
    if (src == dst) {
      ++dropped;
      return;
    }
    entries.push_back({static_cast<UserIndex>(src), static_cast<UserIndex>(dst),
                       static_cast<std::uint64_t>(pos), static_cast<std::uint64_t>(neg)});
  });
  return {OpinionCounts(n, std::move(entries)), dropped};
}

std::vector<PairRow> load_pairs(const std::filesystem::path& path) {
  std::vector<PairRow> rows;
  detail::for_each_row(path, 2, [&](std::size_t line_no, const auto& f) {
    const auto src = detail::parse_number<std::int64_t>(f[0], path, line_no);
    const auto dst = detail::parse_number<std::int64_t>(f[1], path, line_no);
    if (src < 0 || dst < 0) detail::fail_line(path, line_no, "negative user index");
    rows.push_back({line_no, static_cast<UserIndex>(src), static_cast<UserIndex>(dst)});
  });
  return rows;
}

void save_scores(const PersonalityScores& scores, const std::filesystem::path& path) {
  scores.validate();
  auto out = detail::open_output(path);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << i << '\t' << detail::format_double(scores.optimism[i]) << '\t'
        << detail::format_double(scores.pessimism[i]) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

PersonalityScores load_scores(const std::filesystem::path& path) {
  std::map<UserIndex, std::pair<double, double>> rows;
  detail::for_each_row(path, 3, [&](std::size_t line_no, const auto& f) {
    const auto user = detail::parse_number<std::int64_t>(f[0], path, line_no);
    const auto o = detail::parse_number<double>(f[1], path, line_no);
    const auto p = detail::parse_number<double>(f[2], path, line_no);
    if (user < 0) detail::fail_line(path, line_no, "negative user index");
    if (!(o >= 0.0 && o <= 1.0) || !(p >= 0.0 && p <= 1.0)) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": score outside [0, 1]");
    }
    if (!rows.emplace(static_cast<UserIndex>(user), std::pair(o, p)).second) {
      detail::fail_line(path, line_no, "duplicate user " + std::to_string(user));
    }
  });
  // users absent from the file carry no evidence of either trait
  PersonalityScores scores(rows.empty() ? 0 : rows.rbegin()->first + 1);
  for (const auto& [user, op] : rows) {
    scores.optimism[user] = op.first;
    scores.pessimism[user] = op.second;
  }
  return scores;
}

}  // namespace slp
