#pragma once

#include <cstddef>
#include <vector>

#include "dynsa/common.hpp"
#include "dynsa/dynstr.hpp"
#include "dynsa/occindex.hpp"
#include "dynsa/rangetree.hpp"

namespace dynsa {

// Per-cluster data for a word w = S[s..e] with period p.
//
// The rank of occurrence t of a cluster is |C| - t - 1, the number of
// copies of the last p symbols of w that follow it. The tail of a cluster
// is the suffix right after its last occurrence; the cluster is increasing
// when the tail is larger than those last p symbols, decreasing otherwise.
struct ClusterMeta {
  Cluster cluster;
  Index size = 0;
  // Length of the period-p run left of the first occurrence and right of
  // the last one; both are below p.
  Index r_left = 0;
  Index r_right = 0;
  // Common extension beyond the run breaks, against the run around w.
  Index head_lcs = 0;
  Index tail_lcp = 0;
  // 1-based rank of the tail among the tails of clusters of the same class.
  Index tail_rank = 0;
  bool increasing = false;
};

struct OccurrenceInfo {
  Index start = 0;
  Index rank = 0;
  // 0-based position among the occurrences of the same class and rank.
  Index in_rank = 0;
  std::size_t cluster = 0;
  bool increasing = false;
};

// Sorted occurrences A_w of a word, described by its POR without listing
// them. A_w is the decreasing part D followed by the increasing part I. D
// is ordered by ascending rank, I by descending rank, and ties by tail.
//
// An occurrence s1 is (l, r)-extendable when lcs(s - 1, s1 - 1) >= l and
// lcp(e + 1, e1 + 1) >= r. Counting such occurrences in a range of A_w
// reduces to counting queries over one point per cluster.
class SortedOccView {
 public:
  // `occ` must carry the exact smallest period of the word and the word
  // must lie inside the text.
  SortedOccView(TextView text, const POR& occ);

  SortedOccView(SortedOccView&&) noexcept = default;
  SortedOccView& operator=(SortedOccView&&) noexcept = default;

  Index size() const { return decreasing_.occurrences + increasing_.occurrences; }
  Index decreasing_size() const { return decreasing_.occurrences; }
  Index period() const { return p_; }
  Index word_start() const { return s_; }
  Index word_end() const { return e_; }
  Index ext_left() const { return ext_l_; }
  Index ext_right() const { return ext_r_; }
  const std::vector<ClusterMeta>& clusters() const { return meta_; }

  // A_w[i] with its rank decomposition; 1 <= i <= size().
  OccurrenceInfo locate(Index i) const;
  Index select(Index i) const { return locate(i).start; }

  // Number of (l, r)-extendable occurrences among A_w[i..j].
  Index erc_count(Index l, Index r, Index i, Index j) const;
  Index extendable_count(Index l, Index r) const;
  // The i-th smallest (l, r)-extendable occurrence.
  Index ers_select(Index l, Index r, Index i) const;

 private:
  struct Bucket {
    Index start = 0;  // 0-based within the class
    Index first_rank = 0;
    Index rank_step = 0;
    Index ranks = 0;
    Index width = 0;
  };

  struct ClassIndex {
    bool increasing = false;
    Index occurrences = 0;
    std::vector<std::size_t> by_tail;
    std::vector<Bucket> buckets;
    std::vector<Index> bucket_starts;
    RangeTree by_tail_size{2};
    RangeTree central{3};
    RangeTree windowed{4};
    RangeTree left_break{4};
    RangeTree right_break{4};
    RangeTree both_breaks{4};
  };

  struct Query;

  void build_class(ClassIndex& cls, std::vector<std::size_t> members);
  OccurrenceInfo locate_in(const ClassIndex& cls, Index idx) const;
  std::size_t tail_select(const ClassIndex& cls, Index rank, Index in_rank) const;
  Index count_in(const ClassIndex& cls, const Query& q, Index i, Index j) const;
  Index count_full(const ClassIndex& cls, const Query& q, Index lo_rank, Index hi_rank) const;
  Index count_window(const ClassIndex& cls, const Query& q, Index rank, Index tr_lo, Index tr_hi) const;
  Query make_query(Index l, Index r) const;

  Index s_ = 0;
  Index e_ = 0;
  Index p_ = 1;
  Index ext_l_ = 0;
  Index ext_r_ = 0;
  Index key_base_ = 1;
  std::vector<ClusterMeta> meta_;
  ClassIndex decreasing_;
  ClassIndex increasing_;
};

}  // namespace dynsa
