#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynsa/common.hpp"
#include "dynsa/dynstr.hpp"

namespace dynsa {

// Order-statistic sequence of tokens, one per text position. A token keeps
// its identity while edits elsewhere shift its position.
class PositionLedger {
 public:
  using Token = std::int32_t;

  explicit PositionLedger(Index n = 0);

  Index size() const;
  Token token_at(Index pos) const;
  Index position_of(Token t) const;
  // The new token ends up at position pos; later tokens shift right.
  Token insert_at(Index pos);
  void erase_at(Index pos);

  std::int32_t& payload(Token t) { return nodes_[t].payload; }
  std::int32_t payload(Token t) const { return nodes_[t].payload; }

 private:
  struct Node {
    std::int32_t left = 0;
    std::int32_t right = 0;
    std::int32_t parent = 0;
    std::int32_t size = 0;
    std::uint32_t priority = 0;
    std::int32_t payload = -1;
  };
  std::int32_t make();
  void pull(std::int32_t t);
  void split(std::int32_t t, Index k, std::int32_t& a, std::int32_t& b);
  std::int32_t merge(std::int32_t a, std::int32_t b);

  std::vector<Node> nodes_;
  std::vector<std::int32_t> free_;
  std::int32_t root_ = 0;
  std::uint64_t rng_ = 0x1234567u;
};

// Balanced search tree over the distinct length-k words of a text. Words
// that run past the end are padded with a symbol below the alphabet, so
// every position 1..n owns exactly one word and padded words are unique.
// Each node holds the positions of its word ordered by position, and every
// subtree knows how many positions it holds.
class KWordsTree {
 public:
  using NodeId = std::int32_t;

  KWordsTree(TextView text, Index k);
  KWordsTree(const KWordsTree&) = delete;
  KWordsTree& operator=(const KWordsTree&) = delete;
  KWordsTree(KWordsTree&&) = default;
  KWordsTree& operator=(KWordsTree&&) = default;

  Index k() const { return k_; }
  Index size() const { return ledger_->size(); }
  std::size_t node_count() const { return live_nodes_; }

  // Reclassifies the words changed by op. dual.new_view must reflect op.
  void update_on_edit(const DualView& dual, const EditOp& op);

  NodeId node_of(Index i) const;
  // Node of the word at i and the number of positions whose word is
  // lexicographically smaller.
  std::pair<NodeId, Index> find_node(Index i) const;
  // Node holding the suffix of global rank `rank` and its 1-based rank
  // among that node's positions.
  std::pair<NodeId, Index> findvr(Index rank) const;

  Index occurrence_count(NodeId v) const;
  Index min_occurrence(NodeId v) const;
  // Smallest occurrence >= pos, or 0 when there is none.
  Index next_occurrence(NodeId v, Index pos) const;
  std::vector<Index> occurrences(NodeId v) const;
  // Number of positions in nodes strictly left of v.
  Index left_count(NodeId v) const;

  // Cached smallest period of the node's word (0 when not computed yet).
  Index cached_period(NodeId v) const { return nodes_[v].period; }
  void cache_period(NodeId v, Index p) const { nodes_[v].period = p; }

  // In-order listing of (word, occurrences) for structural comparison.
  std::vector<std::pair<std::string, std::vector<Index>>> dump(TextView text) const;

 private:
  struct ByPosition {
    using is_transparent = void;
    const PositionLedger* ledger;
    bool operator()(PositionLedger::Token a, PositionLedger::Token b) const {
      return ledger->position_of(a) < ledger->position_of(b);
    }
    bool operator()(PositionLedger::Token a, Index pos) const { return ledger->position_of(a) < pos; }
    bool operator()(Index pos, PositionLedger::Token b) const { return pos < ledger->position_of(b); }
  };
  struct Node {
    NodeId left = 0;
    NodeId right = 0;
    NodeId parent = 0;
    std::uint32_t priority = 0;
    Index total = 0;
    std::set<PositionLedger::Token, ByPosition> occ;
    mutable Index period = 0;
    bool live = false;
    // Old-text position of the word while an update has emptied the node.
    Index ghost = 0;
  };
  // Sign of (word being placed) minus (word of the node).
  using NodeCmp = std::function<int(NodeId)>;

  Index total(NodeId v) const { return v ? nodes_[v].total : 0; }
  void pull(NodeId v);
  void rotate_up(NodeId v);
  void add_delta(NodeId v, Index delta);
  // Finds or creates the node of a word, searching from `finger` when it
  // is set (cost logarithmic in the in-order distance) or from the root.
  NodeId locate_from(NodeId finger, const NodeCmp& cmp);
  void attach(Index pos, NodeId v);
  // Returns the node that held pos; it stays in the tree as a ghost when
  // keep_empty is set and pos was its last occurrence.
  NodeId remove_position(Index pos, bool keep_empty);
  void erase_node(NodeId v);
  NodeId new_node();

  Index k_;
  // Heap-allocated because the occurrence sets compare through it.
  std::unique_ptr<PositionLedger> ledger_;
  std::vector<Node> nodes_;
  std::vector<NodeId> free_nodes_;
  NodeId root_ = 0;
  std::size_t live_nodes_ = 0;
  std::uint64_t rng_ = 0xABCDEFu;
};

struct Run {
  Index start = 0;
  Index end = 0;
  Index p = 0;
  Index length() const { return end - start + 1; }
  bool operator==(const Run&) const = default;
};

// Maximal interval containing [i..i+p-1] on which the text has period p.
// Two LCE queries.
Run run_with_period(TextView text, Index i, Index p);
bool is_extremely_periodic(const Run& run);
// Every run of length >= 5p whose smallest period is p.
std::vector<Run> extreme_runs(TextView text);

// Smallest period of text[s..s+len-1] by LCE probes. A failed probe at d
// with common extension l rules out every period in (d..l].
Index smallest_period(TextView text, Index s, Index len);

struct Cluster {
  Index a = 0;
  Index b = 0;
  Index p = 1;
  Index size() const { return (b - a) / p + 1; }
  Index at(Index t) const { return a + p * t; }
  bool operator==(const Cluster&) const = default;
};

// Occurrences of the word text[s..e] as maximal arithmetic progressions
// with difference per(w); isolated occurrences are clusters of size 1.
struct POR {
  Index s = 0;
  Index e = 0;
  // per(w). For a word with a single occurrence this is only computed on
  // request and reported as |w| otherwise.
  Index p = 0;
  std::vector<Cluster> clusters;

  Index length() const { return e - s + 1; }
  Index occurrence_count() const;
};

// POR of the word of length tree.k() starting at i, read from `text`,
// which must be the version the tree currently describes.
POR por(const KWordsTree& tree, TextView text, Index i, bool exact_period = false);

// Extensions of the period-p run around the word (s, e) and around the
// first occurrence of a cluster.
struct RunExtensions {
  Index ex_l = 0;
  Index ex_r = 0;
  Index exc_l = 0;
  Index exc_r = 0;
};

struct ClusterProgression {
  RunExtensions ext;
  // t values for which the closed forms below do not apply.
  std::vector<Index> aligned;
  Index word_length = 0;

  // lcs(s - 1, s_t - 1) for non-aligned t.
  Index l_at(Index t, Index p) const { return std::min(ext.ex_l, ext.exc_l + p * t); }
  // lcp(e + 1, e_t + 1) for non-aligned t.
  Index r_at(Index t, Index p) const { return std::min(ext.ex_r, ext.exc_r - p * t); }
  bool is_aligned(Index t) const;
};

ClusterProgression cluster_lce_progression(TextView text, Index s, Index e, const Cluster& c);

// t ranges of a cluster whose suffixes are smaller / larger than suffix s.
struct TRange {
  Index lo = 0;
  Index hi = -1;
  bool empty() const { return lo > hi; }
  Index size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(Index t) const { return lo <= t && t <= hi; }
  bool operator==(const TRange&) const = default;
};

struct LexIntervals {
  TRange less;
  TRange greater;
};

// The cluster's occurrences must be occurrences of text[s..s+len-1] with
// len >= c.p.
LexIntervals lex_intervals(TextView text, const Cluster& c, Index s, Index len);

}  // namespace dynsa
