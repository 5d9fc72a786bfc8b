#include "dynsa/ers.hpp"

#include <algorithm>
#include <string>

namespace dynsa {

namespace {

struct Span {
  Coord lo;
  Coord hi;
  bool empty() const { return lo > hi; }
};

}  // namespace

// Decomposition of an (l, r) query against the run of period p around w,
// which reaches ext_l symbols left of s and ext_r symbols right of e.
//
// Occurrence t of cluster C extends ex_l = t*p + r_left(C) symbols to the
// left inside its run. If ex_l != ext_l the left common extension with w
// is min(ex_l, ext_l); otherwise it is ext_l + head_lcs(C). The right side
// is symmetric with rank*p + r_right(C).
struct SortedOccView::Query {
  bool left_break = false;   // l > ext_l
  bool right_break = false;  // r > ext_r
  // Periodic side: the side holds iff t >= q_l + [r_left < rem_l].
  Index q_l = 0, rem_l = 0;
  Index q_r = 0, rem_r = 0;
  // Broken side: t must equal qe_l and r_left must equal re_l.
  Index qe_l = 0, re_l = 0;
  Index qe_r = 0, re_r = 0;
  Index need_head = 0;
  Index need_tail = 0;
};

SortedOccView::SortedOccView(TextView text, const POR& occ)
    : s_(occ.s), e_(occ.e), p_(occ.p) {
  const Index n = text.size();
  const Index len = occ.length();
  if (s_ < 1 || e_ > n || len < 1) throw InvalidArgument("word must lie inside the text");
  if (p_ < 1 || p_ > len) throw InvalidArgument("word period out of range");
  if (occ.clusters.empty()) throw InvalidArgument("occurrence representation is empty");

  ext_l_ = text.lcs_or0(s_ - 1, s_ + p_ - 1);
  ext_r_ = text.lcp_or0(e_ + 1, e_ + 1 - p_);

  Index max_size = 0;
  for (const Cluster& c : occ.clusters) {
    ClusterMeta m;
    m.cluster = Cluster{c.a, c.b, p_};
    if ((c.b - c.a) % p_ != 0) throw InvalidArgument("cluster step differs from the word period");
    m.size = (c.b - c.a) / p_ + 1;
    Index last_end = c.b + len - 1;
    m.r_left = text.lcs_or0(c.a - 1, c.a + p_ - 1);
    m.r_right = text.lcp_or0(last_end + 1, last_end + 1 - p_);
    if (m.r_left >= p_ || m.r_right >= p_) {
      throw InvalidArgument("cluster (" + std::to_string(c.a) + ", " + std::to_string(c.b) + ") is not maximal");
    }
    m.head_lcs = text.lcs_or0(c.a - m.r_left - 1, s_ - ext_l_ - 1);
    m.tail_lcp = text.lcp_or0(last_end + m.r_right + 1, e_ + ext_r_ + 1);

    // Tail against the last p symbols of w. They cannot agree on p symbols
    // because the cluster is maximal.
    Index tail = last_end + 1;
    Index agree = std::min(p_, text.lcp_or0(tail, e_ - p_ + 1));
    if (agree == p_) throw Error("cluster tail repeats the period; the cluster is not maximal");
    m.increasing = text.at(tail + agree) > text.at(e_ - p_ + 1 + agree);
    max_size = std::max(max_size, m.size);
    meta_.push_back(m);
  }
  key_base_ = max_size + 2;

  std::vector<std::size_t> dec, inc;
  for (std::size_t c = 0; c < meta_.size(); ++c) (meta_[c].increasing ? inc : dec).push_back(c);

  auto tail_less = [&](std::size_t x, std::size_t y) {
    Index tx = meta_[x].cluster.b + len;
    Index ty = meta_[y].cluster.b + len;
    if (tx > n || ty > n) return tx > n && ty <= n;
    return text.suffix_cmp(tx, ty) < 0;
  };
  std::sort(dec.begin(), dec.end(), tail_less);
  std::sort(inc.begin(), inc.end(), tail_less);

  decreasing_.increasing = false;
  increasing_.increasing = true;
  build_class(decreasing_, std::move(dec));
  build_class(increasing_, std::move(inc));
}

void SortedOccView::build_class(ClassIndex& cls, std::vector<std::size_t> members) {
  cls.by_tail = std::move(members);
  for (std::size_t q = 0; q < cls.by_tail.size(); ++q) {
    ClusterMeta& m = meta_[cls.by_tail[q]];
    m.tail_rank = static_cast<Index>(q) + 1;
    cls.occurrences += m.size;
    const Coord tr = m.tail_rank;
    cls.by_tail_size.insert({tr, m.size});
    cls.central.insert({m.r_left, m.r_right, m.size}, m.size);
    cls.windowed.insert({m.r_left, m.r_right, m.size, tr});
    cls.left_break.insert({m.r_left * key_base_ + m.size, m.head_lcs, m.r_right, tr});
    cls.right_break.insert({m.r_right * key_base_ + m.size, m.tail_lcp, m.r_left, tr});
    cls.both_breaks.insert({(m.r_left * p_ + m.r_right) * key_base_ + m.size, m.head_lcs, m.tail_lcp, tr});
  }

  // Distinct maximal ranks r_1 > r_2 > ... with widths s_q = number of
  // clusters whose maximal rank is at least r_q. Bucket q holds the ranks
  // r_{q+1}+1 .. r_q, each appearing in s_q clusters.
  std::vector<Index> top;
  for (std::size_t c : cls.by_tail) top.push_back(meta_[c].size - 1);
  std::sort(top.rbegin(), top.rend());
  struct Raw {
    Index high, low, width;
  };
  std::vector<Raw> raw;
  for (std::size_t q = 0; q < top.size(); ++q) {
    if (q + 1 < top.size() && top[q + 1] == top[q]) continue;
    Index next = q + 1 < top.size() ? top[q + 1] : -1;
    raw.push_back(Raw{top[q], next + 1, static_cast<Index>(q) + 1});
  }
  if (!cls.increasing) std::reverse(raw.begin(), raw.end());
  Index start = 0;
  for (const Raw& b : raw) {
    Bucket bucket;
    bucket.start = start;
    bucket.ranks = b.high - b.low + 1;
    bucket.width = b.width;
    bucket.first_rank = cls.increasing ? b.high : b.low;
    bucket.rank_step = cls.increasing ? -1 : 1;
    cls.buckets.push_back(bucket);
    cls.bucket_starts.push_back(start);
    start += bucket.ranks * bucket.width;
  }
  if (start != cls.occurrences) throw Error("bucket sizes do not add up to the class size");
}

std::size_t SortedOccView::tail_select(const ClassIndex& cls, Index rank, Index in_rank) const {
  // Smallest tail rank m such that in_rank + 1 clusters among tail ranks
  // 1..m have an occurrence of this rank.
  Index lo = 1, hi = static_cast<Index>(cls.by_tail.size());
  while (lo < hi) {
    Index mid = lo + (hi - lo) / 2;
    Index c = cls.by_tail_size.count(RangeD().axis(0, 1, mid).axis(1, rank + 1, kPosInf));
    if (c >= in_rank + 1) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return cls.by_tail[static_cast<std::size_t>(lo - 1)];
}

OccurrenceInfo SortedOccView::locate_in(const ClassIndex& cls, Index idx) const {
  auto it = std::upper_bound(cls.bucket_starts.begin(), cls.bucket_starts.end(), idx);
  const Bucket& b = cls.buckets[static_cast<std::size_t>(it - cls.bucket_starts.begin()) - 1];
  Index step = (idx - b.start) / b.width;
  OccurrenceInfo info;
  info.rank = b.first_rank + b.rank_step * step;
  info.in_rank = idx - b.start - b.width * step;
  info.cluster = tail_select(cls, info.rank, info.in_rank);
  info.increasing = cls.increasing;
  const ClusterMeta& m = meta_[info.cluster];
  info.start = m.cluster.a + (m.size - info.rank - 1) * p_;
  return info;
}

OccurrenceInfo SortedOccView::locate(Index i) const {
  if (i < 1 || i > size()) {
    throw OutOfRange("occurrence rank " + std::to_string(i) + " outside [1.." + std::to_string(size()) + "]");
  }
  if (i <= decreasing_.occurrences) return locate_in(decreasing_, i - 1);
  return locate_in(increasing_, i - decreasing_.occurrences - 1);
}

SortedOccView::Query SortedOccView::make_query(Index l, Index r) const {
  Query q;
  q.left_break = l > ext_l_;
  q.right_break = r > ext_r_;
  q.q_l = l / p_;
  q.rem_l = l % p_;
  q.q_r = r / p_;
  q.rem_r = r % p_;
  q.qe_l = ext_l_ / p_;
  q.re_l = ext_l_ % p_;
  q.qe_r = ext_r_ / p_;
  q.re_r = ext_r_ % p_;
  q.need_head = l - ext_l_;
  q.need_tail = r - ext_r_;
  return q;
}

namespace {

// Remainders below `rem` need one more period; flag 1 selects them.
Span remainder_span(Index rem, Index p, int flag) { return flag ? Span{0, rem - 1} : Span{rem, p - 1}; }

}  // namespace

Index SortedOccView::count_full(const ClassIndex& cls, const Query& q, Index lo_rank, Index hi_rank) const {
  if (lo_rank > hi_rank) return 0;
  Index total = 0;
  const Index M = key_base_;
  if (!q.left_break && !q.right_break) {
    for (int fl : {0, 1}) {
      Span sl = remainder_span(q.rem_l, p_, fl);
      if (sl.empty()) continue;
      for (int fr : {0, 1}) {
        Span sr = remainder_span(q.rem_r, p_, fr);
        if (sr.empty()) continue;
        // Ranks lo..min(hi, |C| - c1) of each cluster qualify.
        Index lo = std::max(lo_rank, q.q_r + fr);
        Index c1 = 1 + q.q_l + fl;
        if (lo > hi_rank) continue;
        RangeD box = RangeD().axis(0, sl.lo, sl.hi).axis(1, sr.lo, sr.hi);
        RangeD full = box;
        total += cls.central.count(full.axis(2, hi_rank + c1, kPosInf)) * (hi_rank - lo + 1);
        if (lo <= hi_rank - 1) {
          RangeD part = box;
          auto [cnt, sum] = cls.central.count_sum(part.axis(2, lo + c1, hi_rank - 1 + c1));
          total += sum - cnt * (c1 + lo - 1);
        }
      }
    }
  } else if (q.left_break && !q.right_break) {
    for (int fr : {0, 1}) {
      Span sr = remainder_span(q.rem_r, p_, fr);
      if (sr.empty()) continue;
      Index lo = std::max(lo_rank, q.q_r + fr);
      if (lo > hi_rank) continue;
      Coord base = q.re_l * M;
      total += cls.left_break.count(RangeD()
                                        .axis(0, base + lo + 1 + q.qe_l, base + hi_rank + 1 + q.qe_l)
                                        .axis(1, q.need_head, kPosInf)
                                        .axis(2, sr.lo, sr.hi));
    }
  } else if (!q.left_break && q.right_break) {
    if (q.qe_r < lo_rank || q.qe_r > hi_rank) return 0;
    for (int fl : {0, 1}) {
      Span sl = remainder_span(q.rem_l, p_, fl);
      if (sl.empty()) continue;
      Coord base = q.re_r * M;
      total += cls.right_break.count(RangeD()
                                         .axis(0, base + q.qe_r + 1 + q.q_l + fl, base + M - 1)
                                         .axis(1, q.need_tail, kPosInf)
                                         .axis(2, sl.lo, sl.hi));
    }
  } else {
    if (q.qe_r < lo_rank || q.qe_r > hi_rank) return 0;
    Coord key = (q.re_l * p_ + q.re_r) * M + q.qe_l + q.qe_r + 1;
    total += cls.both_breaks.count(
        RangeD().axis(0, key, key).axis(1, q.need_head, kPosInf).axis(2, q.need_tail, kPosInf));
  }
  return total;
}

Index SortedOccView::count_window(const ClassIndex& cls, const Query& q, Index rank, Index tr_lo,
                                  Index tr_hi) const {
  if (tr_lo > tr_hi) return 0;
  Index total = 0;
  const Index M = key_base_;
  if (!q.left_break && !q.right_break) {
    for (int fl : {0, 1}) {
      Span sl = remainder_span(q.rem_l, p_, fl);
      if (sl.empty()) continue;
      for (int fr : {0, 1}) {
        Span sr = remainder_span(q.rem_r, p_, fr);
        if (sr.empty() || rank < q.q_r + fr) continue;
        total += cls.windowed.count(RangeD()
                                        .axis(0, sl.lo, sl.hi)
                                        .axis(1, sr.lo, sr.hi)
                                        .axis(2, rank + 1 + q.q_l + fl, kPosInf)
                                        .axis(3, tr_lo, tr_hi));
      }
    }
  } else if (q.left_break && !q.right_break) {
    for (int fr : {0, 1}) {
      Span sr = remainder_span(q.rem_r, p_, fr);
      if (sr.empty() || rank < q.q_r + fr) continue;
      Coord key = q.re_l * M + rank + 1 + q.qe_l;
      total += cls.left_break.count(RangeD()
                                        .axis(0, key, key)
                                        .axis(1, q.need_head, kPosInf)
                                        .axis(2, sr.lo, sr.hi)
                                        .axis(3, tr_lo, tr_hi));
    }
  } else if (!q.left_break && q.right_break) {
    if (rank != q.qe_r) return 0;
    for (int fl : {0, 1}) {
      Span sl = remainder_span(q.rem_l, p_, fl);
      if (sl.empty()) continue;
      Coord base = q.re_r * M;
      total += cls.right_break.count(RangeD()
                                         .axis(0, base + q.qe_r + 1 + q.q_l + fl, base + M - 1)
                                         .axis(1, q.need_tail, kPosInf)
                                         .axis(2, sl.lo, sl.hi)
                                         .axis(3, tr_lo, tr_hi));
    }
  } else {
    if (rank != q.qe_r) return 0;
    Coord key = (q.re_l * p_ + q.re_r) * M + q.qe_l + q.qe_r + 1;
    total += cls.both_breaks.count(RangeD()
                                       .axis(0, key, key)
                                       .axis(1, q.need_head, kPosInf)
                                       .axis(2, q.need_tail, kPosInf)
                                       .axis(3, tr_lo, tr_hi));
  }
  return total;
}

// [i..j] are 0-based positions inside the class. The range covers a window
// of the ranks at both ends and every occurrence of the ranks in between.
Index SortedOccView::count_in(const ClassIndex& cls, const Query& q, Index i, Index j) const {
  OccurrenceInfo a = locate_in(cls, i);
  OccurrenceInfo b = locate_in(cls, j);
  Index tr_a = meta_[a.cluster].tail_rank;
  Index tr_b = meta_[b.cluster].tail_rank;
  if (a.rank == b.rank) return count_window(cls, q, a.rank, tr_a, tr_b);
  auto last = static_cast<Index>(cls.by_tail.size());
  return count_window(cls, q, a.rank, tr_a, last) + count_window(cls, q, b.rank, 1, tr_b) +
         count_full(cls, q, std::min(a.rank, b.rank) + 1, std::max(a.rank, b.rank) - 1);
}

Index SortedOccView::erc_count(Index l, Index r, Index i, Index j) const {
  if (l < 0 || r < 0) throw InvalidArgument("extension lengths must be non-negative");
  if (i < 1 || j > size() || i > j) {
    throw InvalidArgument("malformed range [" + std::to_string(i) + ".." + std::to_string(j) + "] for " +
                          std::to_string(size()) + " occurrences");
  }
  Query q = make_query(l, r);
  Index d = decreasing_.occurrences;
  Index total = 0;
  if (i <= d) total += count_in(decreasing_, q, i - 1, std::min(j, d) - 1);
  if (j > d) total += count_in(increasing_, q, std::max(i, d + 1) - d - 1, j - d - 1);
  return total;
}

Index SortedOccView::extendable_count(Index l, Index r) const { return erc_count(l, r, 1, size()); }

Index SortedOccView::ers_select(Index l, Index r, Index i) const {
  Index total = extendable_count(l, r);
  if (i < 1 || i > total) {
    throw OutOfRange("extendable rank " + std::to_string(i) + " outside [1.." + std::to_string(total) + "]");
  }
  Index lo = 1, hi = size();
  while (lo < hi) {
    Index mid = lo + (hi - lo) / 2;
    if (erc_count(l, r, 1, mid) >= i) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return select(lo);
}

}  // namespace dynsa
