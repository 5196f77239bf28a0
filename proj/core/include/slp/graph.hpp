#pragma once

// Domain types for signed user-user networks and the behavioral feedback
// (item ratings, pairwise opinion counts) that personality scores are derived
// from, plus their TSV readers and writers.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace slp {

using UserIndex = std::size_t;
using ItemIndex = std::size_t;

enum class Sign : std::int8_t { negative = -1, positive = 1 };

constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }

struct SignedEdge {
  UserIndex src = 0;
  UserIndex dst = 0;
  Sign sign = Sign::positive;

  friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

// Sparse directed matrix G with entries in {+1, -1}; absent entries are
// missing (G_ij = 0). Edges are kept sorted by (src, dst) so iteration order
// is canonical regardless of how the graph was assembled.
class SignedGraph {
 public:
  SignedGraph() = default;
  explicit SignedGraph(std::size_t n) : n_(n) {}

  // Throws ValidationError on self-edges, out-of-range indices or duplicate
  // (src, dst) pairs.
  SignedGraph(std::size_t n, std::vector<SignedEdge> edges);

  std::size_t n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const SignedEdge> edges() const noexcept { return edges_; }

  // +1, -1, or 0 when (i, j) is not stored.
  int sign(UserIndex i, UserIndex j) const;

  std::size_t positive_count() const noexcept { return positives_; }
  std::size_t negative_count() const noexcept { return edge_count() - positives_; }

  // Same edge set over a larger user universe.
  SignedGraph with_user_count(std::size_t n) const;

  friend bool operator==(const SignedGraph&, const SignedGraph&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t positives_ = 0;
  std::vector<SignedEdge> edges_;
};

struct Rating {
  UserIndex user = 0;
  ItemIndex item = 0;
  int value = 0;
};

// User-item ratings r_ik in {1..5}. item_means()[k] is unset for unrated
// items.
class RatingsTable {
 public:
  RatingsTable() = default;
  // Duplicate (user, item) pairs keep the last value.
  RatingsTable(std::size_t n_users, std::size_t n_items, std::vector<Rating> ratings);

  std::size_t n_users() const noexcept { return n_users_; }
  std::size_t n_items() const noexcept { return n_items_; }
  std::size_t size() const noexcept { return ratings_.size(); }

  // Sorted by (user, item).
  std::span<const Rating> ratings() const noexcept { return ratings_; }
  std::span<const Rating> ratings_of(UserIndex user) const;
  const std::vector<std::optional<double>>& item_means() const noexcept { return item_means_; }

 private:
  std::size_t n_users_ = 0;
  std::size_t n_items_ = 0;
  std::vector<Rating> ratings_;
  std::vector<std::size_t> user_offsets_;
  std::vector<std::optional<double>> item_means_;
};

struct OpinionEntry {
  UserIndex src = 0;
  UserIndex dst = 0;
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
};

// Positive and negative opinion counts P_ij, N_ij expressed by user i toward
// user j. Stored as one sparse list sorted by (src, dst).
class OpinionCounts {
 public:
  OpinionCounts() = default;
  // Duplicate pairs accumulate; self-pairs are rejected.
  OpinionCounts(std::size_t n, std::vector<OpinionEntry> entries);

  std::size_t n() const noexcept { return n_; }
  std::span<const OpinionEntry> entries() const noexcept { return entries_; }
  std::span<const OpinionEntry> entries_of(UserIndex src) const;

 private:
  std::size_t n_ = 0;
  std::vector<OpinionEntry> entries_;
  std::vector<std::size_t> src_offsets_;
};

// Per-user optimism o_i and pessimism p_i, each in [0, 1].
struct PersonalityScores {
  std::vector<double> optimism;
  std::vector<double> pessimism;

  PersonalityScores() = default;
  explicit PersonalityScores(std::size_t n) : optimism(n, 0.0), pessimism(n, 0.0) {}
  PersonalityScores(std::vector<double> o, std::vector<double> p);

  std::size_t size() const noexcept { return optimism.size(); }
  void validate() const;

  friend bool operator==(const PersonalityScores&, const PersonalityScores&) = default;
};

template <typename T>
struct Loaded {
  T value;
  std::size_t dropped_self_pairs = 0;
};

// "src<TAB>dst<TAB>sign" lines, sign in {1, -1}. With no explicit n the
// user count is 1 + max index seen. Duplicate pairs keep the last sign and
// self-edges are dropped.
Loaded<SignedGraph> load_signed_graph(const std::filesystem::path& path,
                                      std::optional<std::size_t> n = std::nullopt);
void save_signed_graph(const SignedGraph& graph, const std::filesystem::path& path);

// "user<TAB>item<TAB>rating" lines, rating in {1..5}.
RatingsTable load_ratings(const std::filesystem::path& path);
void save_ratings(const RatingsTable& table, const std::filesystem::path& path);

// "src<TAB>dst<TAB>pos_count<TAB>neg_count" lines.
Loaded<OpinionCounts> load_opinions(const std::filesystem::path& path);

// "src<TAB>dst" query lines; indices are not range-checked here so callers
// can report every bad row at once.
struct PairRow {
  std::size_t line = 0;
  UserIndex src = 0;
  UserIndex dst = 0;
};
std::vector<PairRow> load_pairs(const std::filesystem::path& path);

// "user<TAB>o<TAB>p" lines using shortest round-trip decimal text.
void save_scores(const PersonalityScores& scores, const std::filesystem::path& path);
PersonalityScores load_scores(const std::filesystem::path& path);

}  // namespace slp
