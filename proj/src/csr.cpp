#include "dynsa/csr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dynsa {

namespace {

using Seq = PNormalSeq;

Seq max_of(std::initializer_list<Seq> parts) {
  auto it = parts.begin();
  Seq acc = *it;
  for (++it; it != parts.end(); ++it) acc = Seq::max(acc, *it);
  return acc;
}

Seq min_of(std::initializer_list<Seq> parts) {
  auto it = parts.begin();
  Seq acc = *it;
  for (++it; it != parts.end(); ++it) acc = Seq::min(acc, *it);
  return acc;
}

TRange intersect(const TRange& a, const TRange& b) {
  if (a.empty() || b.empty()) return TRange{};
  return TRange{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Walks [range.lo..range.hi], handing the listed exceptional t values to
// on_single one by one and the maximal runs between them to on_segment.
template <typename Single, typename Segment>
void for_segments(const TRange& range, const std::vector<Index>& exceptions, Single&& on_single,
                  Segment&& on_segment) {
  if (range.empty()) return;
  Index from = range.lo;
  std::vector<Index> cuts;
  for (Index t : exceptions) {
    if (range.contains(t)) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (Index t : cuts) {
    if (from <= t - 1) on_segment(from, t - 1);
    on_single(t);
    from = t + 1;
  }
  if (from <= range.hi) on_segment(from, range.hi);
}

Index ceil_sqrt(Index n) {
  auto k = static_cast<Index>(std::sqrt(static_cast<double>(n)));
  while (k * k < n) ++k;
  while (k > 1 && (k - 1) * (k - 1) >= n) --k;
  return std::max<Index>(1, k);
}

}  // namespace

// ---------------------------------------------------------------------------
// RankStore

RankStore::RankStore(Index n) : n_(n), base_(n) {}

FixedWidthStairsStore& RankStore::store(Index p) {
  auto& slot = per_p_[p];
  if (!slot) slot = std::make_unique<FixedWidthStairsStore>(p, n_, EpochPolicy::current().stairs_flush);
  return *slot;
}

void RankStore::add_interval(Index i, Index j, std::int64_t amount) {
  if (amount == 0) return;
  ++op_counters().interval_updates;
  ++stats_.intervals;
  base_.add(i, j, amount);
}

void RankStore::add_stairs(TextView text, const StairsUpdate& u) {
  ++op_counters().stairs_updates;
  if (u.i < 1 || u.j > n_ || u.i > u.j) {
    throw OutOfRange("stairs update [" + std::to_string(u.i) + ".." + std::to_string(u.j) + "] outside [1.." +
                     std::to_string(n_) + "]");
  }
  Index steps = u.steps();
  if (steps <= 5) {
    ++stats_.expanded_stairs;
    for (Index t = 1; t <= steps; ++t) {
      Index lo, hi;
      if (u.orientation == Orientation::Decreasing) {
        lo = std::max(u.j - t * u.p + 1, u.i);
        hi = u.j - (t - 1) * u.p;
      } else {
        lo = u.i + (t - 1) * u.p;
        hi = std::min(u.i + t * u.p - 1, u.j);
      }
      add_interval(lo, hi, u.sign * t);
    }
    return;
  }
  Run run = run_with_period(text, u.i, u.p);
  if (run.start > u.i || run.end < u.j) {
    throw Error("stairs update [" + std::to_string(u.i) + ".." + std::to_string(u.j) + "] with width " +
                std::to_string(u.p) + " is not inside a run of that period");
  }
  ++stats_.routed_stairs;
  register_run(run);
  store(u.p).apply(u);
}

void RankStore::apply(TextView text, const BatchUpdate& u, int sign) {
  if (const auto* iv = std::get_if<IntervalAdd>(&u)) {
    add_interval(iv->i, iv->j, iv->amount * sign);
  } else {
    StairsUpdate st = std::get<StairsUpdate>(u);
    st.sign *= sign;
    add_stairs(text, st);
  }
}

std::int64_t RankStore::read(Index i) const {
  std::int64_t v = base_.read(i);
  if (act_int_.empty()) return v;
  auto hits = act_int_.report(RangeD().axis(0, kNegInf, i).axis(1, i, kPosInf));
  std::vector<Index> ps;
  for (const PointD& pt : hits) ps.push_back(pt.value);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  for (Index p : ps) v += per_p_.at(p)->read(i);
  return v;
}

void RankStore::assign(Index i, std::int64_t value) {
  std::int64_t cur = read(i);
  if (cur != value) base_.add(i, i, value - cur);
}

bool RankStore::register_run(const Run& r) {
  auto key = std::make_tuple(r.p, r.start, r.end);
  if (keys_.count(key)) return false;
  keys_[key] = act_int_.insert({r.start, r.end}, r.p);
  ++stats_.registrations;
  return true;
}

void RankStore::unregister_run(Index p, Index start, Index end) {
  auto it = keys_.find(std::make_tuple(p, start, end));
  if (it == keys_.end()) return;
  act_int_.remove(it->second);
  keys_.erase(it);
}

bool RankStore::covered(Index y, Index p) const {
  // Maximal runs of one period never nest, so only the two registrations
  // starting last at or before y can contain it.
  auto it = keys_.upper_bound(std::make_tuple(p, y, kPosInf));
  for (int step = 0; step < 2 && it != keys_.begin(); ++step) {
    --it;
    auto [q, start, end] = it->first;
    if (q != p) break;
    if (start <= y && y <= end) return true;
  }
  return false;
}

void RankStore::after_substitution(TextView text, Index x) {
  if (keys_.empty()) return;
  std::vector<Run> old;
  for (auto h : act_int_.report_handles(RangeD().axis(0, kNegInf, x + 1).axis(1, x - 1, kPosInf))) {
    const PointD& pt = act_int_.point(h);
    old.push_back(Run{pt.coords[0], pt.coords[1], pt.value});
  }
  for (const Run& r : old) unregister_run(r.p, r.start, r.end);
  for (const Run& r : old) {
    for (Index window : {r.start, r.end - r.p + 1}) {
      Run q = run_with_period(text, window, r.p);
      if (is_extremely_periodic(q)) register_run(q);
    }
  }
  // Positions of a dropped run that no registration of its period covers
  // any more move their stairs value into the interval store.
  for (const Run& r : old) {
    FixedWidthStairsStore& st = store(r.p);
    for (Index y = r.start; y <= r.end; ++y) {
      if (covered(y, r.p)) continue;
      std::int64_t v = st.zero_index(y);
      ++stats_.zeroed;
      if (v != 0) base_.add(y, y, v);
    }
  }
}

void RankStore::check_invariants(TextView text) const {
  if (act_int_.size() != keys_.size()) throw Error("registry index and key set disagree");
  for (const auto& [key, handle] : keys_) {
    auto [p, start, end] = key;
    Run q = run_with_period(text, start, p);
    if (q.start != start || q.end != end || !is_extremely_periodic(q)) {
      throw Error("registered interval (" + std::to_string(start) + ", " + std::to_string(end) + ", " +
                  std::to_string(p) + ") is not an extremely periodic run");
    }
    if (!act_int_.contains(handle)) throw Error("registry handle is stale");
  }
  for (const auto& [p, st] : per_p_) {
    for (Index y = 1; y <= n_; ++y) {
      if (covered(y, p)) continue;
      if (st->read(y) != 0) {
        throw Error("stairs store of width " + std::to_string(p) + " is nonzero at uncovered position " +
                    std::to_string(y));
      }
    }
  }
}

std::vector<Run> RankStore::registered_runs() const {
  std::vector<Run> out;
  for (const auto& [key, handle] : keys_) {
    auto [p, start, end] = key;
    out.push_back(Run{start, end, p});
  }
  return out;
}

// ---------------------------------------------------------------------------
// DynamicISA

DynamicISA::DynamicISA(std::string_view text, CsrOptions options, Alphabet alphabet)
    : options_(options), text_(text, alphabet) {
  rebuild();
}

void DynamicISA::rebuild() {
  Index n = text_.size();
  k_ = ceil_sqrt(n);
  h_ = (k_ + 1) / 2;
  TextView view = text_.view();
  ktree_ = std::make_unique<KWordsTree>(view, k_);
  htree_ = std::make_unique<KWordsTree>(view, h_);
  ranks_ = RankStore(n);
  std::vector<Index> sa(static_cast<std::size_t>(n));
  std::iota(sa.begin(), sa.end(), 1);
  std::sort(sa.begin(), sa.end(), [&](Index a, Index b) { return view.suffix_cmp(a, b) < 0; });
  Index r = 0;
  for (Index q = 0; q < n; ++q) {
    if (q > 0 && view.lcp(sa[q - 1], sa[q]) >= k_) {
      ++r;
    } else {
      r = 0;
    }
    if (r > 0) ranks_.add_interval(sa[q], sa[q], r);
  }
}

void DynamicISA::check_position(Index i) const {
  if (i < 1 || i > size()) {
    throw OutOfRange("position " + std::to_string(i) + " outside [1.." + std::to_string(size()) + "]");
  }
}

void DynamicISA::apply(const EditOp& op) {
  if (op.kind != EditKind::Substitute) {
    throw Unsupported("the inverted suffix array engine only supports symbol substitutions, got '" +
                      to_string(op) + "'");
  }
  substitute(op.position, op.symbol);
}

void DynamicISA::substitute(Index x, Symbol c) {
  check_position(x);
  EditOp op = EditOp::sub(x, c);
  DualView dual = text_.apply(op);
  TextView before = dual.old_view;
  TextView after = dual.new_view;
  Index g = k_ - h_;
  try {
    // Dynamic suffixes leave their old clusters. Runs are read from the old
    // version, so this happens before the registry is updated.
    shift_half(before, *htree_, x - h_ + 1, g, -1);
    shift_half(before, *htree_, x, h_ - 2, -1);
    htree_->update_on_edit(dual, op);
    ktree_->update_on_edit(dual, op);
    ranks_.after_substitution(after, x);
    overtake_updates(dual, x);
    shift_half(after, *htree_, x - h_ + 1, g, +1);
    shift_half(after, *htree_, x, h_ - 2, +1);
    evaluate_half(after, x - h_ + 1, g);
    evaluate_half(after, x, h_ - 2);
  } catch (...) {
    text_.commit();
    throw;
  }
  text_.commit();

  const EpochPolicy& policy = EpochPolicy::current();
  double root = std::sqrt(static_cast<double>(size()));
  if (k_ < policy.k_low * root || k_ > policy.k_high * root) rebuild();
  if (options_.check_invariants) check_invariants();
}

Index DynamicISA::close_rank(Index i) const {
  check_position(i);
  return ranks_.read(i);
}

Index DynamicISA::isa(Index i) const {
  check_position(i);
  return ktree_->find_node(i).second + ranks_.read(i) + 1;
}

void DynamicISA::check_invariants() const { ranks_.check_invariants(text_.view()); }

// An occurrence s1 of the anchor word S[s..e] (|w| = h) induces the word
// of the dynamic suffix s - delta at s1 - delta exactly when
// lcs(s1 - 1, s - 1) >= delta and lcp(e1 + 1, e + 1) >= g - delta with
// g = k - h. Suffix order of the induced pair equals that of s1 and s.
void DynamicISA::shift_half(TextView view, const KWordsTree& tree, Index s, Index delta_max, int sign) {
  if (s < 1 || s > view.size() || delta_max < 0) return;
  delta_max = std::min(delta_max, s - 1);
  const Index g = k_ - h_;
  const Index e = s + h_ - 1;
  POR occ = por(tree, view, s);

  auto single = [&](Index s1) {
    if (s1 == s || view.suffix_cmp(s1, s) <= 0) return;
    Index l = view.lcs_or0(s1 - 1, s - 1);
    Index r = view.lcp_or0(s1 + h_, e + 1);
    Index lo = s1 - std::min(l, delta_max);
    Index hi = s1 - std::max<Index>(0, g - r);
    if (lo <= hi) ranks_.add_interval(lo, hi, sign);
  };

  for (const Cluster& c : occ.clusters) {
    if (c.size() == 1 || options_.expand_clusters) {
      for (Index t = 0; t < c.size(); ++t) single(c.at(t));
      continue;
    }
    LexIntervals li = lex_intervals(view, c, s, h_);
    if (li.greater.empty()) continue;
    ClusterProgression pr = cluster_lce_progression(view, s, e, c);
    const RunExtensions& ex = pr.ext;
    const Index p = c.p;
    for_segments(
        li.greater, pr.aligned, [&](Index t) { single(c.at(t)); },
        [&](Index u, Index v) {
          Index su = c.at(u);
          Seq lo = max_of({Seq::arith(su - ex.ex_l, p), Seq::fixed(c.a - ex.exc_l), Seq::arith(su - delta_max, p)});
          Seq hi = min_of({Seq::arith(su, p), Seq::arith(su - g + ex.ex_r, p), Seq::fixed(c.a - g + ex.exc_r)});
          for (const BatchUpdate& upd : reduce_interval_sequence(lo, hi, v - u + 1)) ranks_.apply(view, upd, sign);
        });
  }
}

void DynamicISA::evaluate_half(TextView view, Index s, Index delta_max) {
  if (s < 1 || s > view.size() || delta_max < 0) return;
  delta_max = std::min(delta_max, s - 1);
  const Index g = k_ - h_;
  const Index e = s + h_ - 1;
  POR occ = por(*htree_, view, s);

  // Re[delta] lives at index delta + 1 of these scratch stores.
  IntervalStore re(delta_max + 1);
  std::unique_ptr<FixedWidthStairsStore> re_stairs;

  auto single = [&](Index s1) {
    if (s1 == s || view.suffix_cmp(s1, s) >= 0) return;
    Index l = view.lcs_or0(s1 - 1, s - 1);
    Index r = view.lcp_or0(s1 + h_, e + 1);
    Index lo = std::max<Index>(0, g - r);
    Index hi = std::min(l, delta_max);
    if (lo <= hi) re.add(lo + 1, hi + 1, 1);
  };

  for (const Cluster& c : occ.clusters) {
    if (c.size() == 1 || options_.expand_clusters) {
      for (Index t = 0; t < c.size(); ++t) single(c.at(t));
      continue;
    }
    LexIntervals li = lex_intervals(view, c, s, h_);
    if (li.less.empty()) continue;
    ClusterProgression pr = cluster_lce_progression(view, s, e, c);
    const RunExtensions& ex = pr.ext;
    const Index p = c.p;
    for_segments(
        li.less, pr.aligned, [&](Index t) { single(c.at(t)); },
        [&](Index u, Index v) {
          Seq lo = max_of({Seq::fixed(0), Seq::fixed(g - ex.ex_r), Seq::arith(g - ex.exc_r + p * u, p)});
          Seq hi = min_of({Seq::fixed(ex.ex_l), Seq::arith(ex.exc_l + p * u, p), Seq::fixed(delta_max)});
          for (const BatchUpdate& upd : reduce_interval_sequence(lo, hi, v - u + 1)) {
            if (const auto* iv = std::get_if<IntervalAdd>(&upd)) {
              re.add(iv->i + 1, iv->j + 1, iv->amount);
            } else {
              StairsUpdate st = std::get<StairsUpdate>(upd);
              st.i += 1;
              st.j += 1;
              if (!re_stairs) re_stairs = std::make_unique<FixedWidthStairsStore>(p, delta_max + 1);
              re_stairs->apply(st);
            }
          }
        });
  }

  for (Index delta = 0; delta <= delta_max; ++delta) {
    std::int64_t v = re.read(delta + 1) + (re_stairs ? re_stairs->read(delta + 1) : 0);
    ranks_.assign(s - delta, v);
  }
}

// Every overtake between static suffixes i and j is implied by exactly one
// occurrence s1 of w = S[x-k..x-1] whose order against s flips: the pair
// is (s - m', s1 - m') for some m' <= m(s, s1), the common extension to the
// left in both versions.
void DynamicISA::overtake_updates(const DualView& dual, Index x) {
  const Index s = x - k_;
  if (s < 1) return;
  const Index e = x - 1;
  TextView now = dual.new_view;
  TextView before = dual.old_view;
  POR occ = por(*ktree_, now, s);

  auto single = [&](Index s1) {
    if (s1 == s) return;
    int c_now = now.suffix_cmp(s1, s);
    int c_before = before.suffix_cmp(s1, s);
    int dir;
    if (c_now < 0 && c_before > 0) {
      dir = 1;
    } else if (c_now > 0 && c_before < 0) {
      dir = -1;
    } else {
      return;
    }
    Index m = std::min(now.lcs_or0(s1 - 1, s - 1), before.lcs_or0(s1 - 1, s - 1));
    ranks_.add_interval(s - m, s, dir);
    ranks_.add_interval(s1 - m, s1, -dir);
  };

  for (const Cluster& c : occ.clusters) {
    const Index p = c.p;
    const Index m = c.size();
    // Occurrences overlapping x are dynamic; the static ones form a prefix
    // and a suffix of the cluster.
    Index t1 = c.a <= x - k_ ? std::min(m - 1, (x - k_ - c.a) / p) : -1;
    Index t2 = c.a >= x + 1 ? 0 : (x + 1 - c.a + p - 1) / p;
    std::vector<TRange> parts;
    if (t1 >= 0) parts.push_back(TRange{0, t1});
    if (t2 <= m - 1) parts.push_back(TRange{t2, m - 1});
    for (const TRange& part : parts) {
      Cluster sub{c.at(part.lo), c.at(part.hi), p};
      if (sub.size() == 1 || options_.expand_clusters) {
        for (Index t = 0; t < sub.size(); ++t) single(sub.at(t));
        continue;
      }
      LexIntervals li_now = lex_intervals(now, sub, s, k_);
      LexIntervals li_before = lex_intervals(before, sub, s, k_);
      TRange down = intersect(li_now.less, li_before.greater);
      TRange up = intersect(li_now.greater, li_before.less);
      if (down.empty() && up.empty()) continue;
      ClusterProgression pn = cluster_lce_progression(now, s, e, sub);
      ClusterProgression pb = cluster_lce_progression(before, s, e, sub);
      std::vector<Index> aligned = pn.aligned;
      aligned.insert(aligned.end(), pb.aligned.begin(), pb.aligned.end());
      const RunExtensions& xn = pn.ext;
      const RunExtensions& xb = pb.ext;
      for (auto [range, dir] : {std::make_pair(down, 1), std::make_pair(up, -1)}) {
        for_segments(
            range, aligned, [&](Index t) { single(sub.at(t)); },
            [&](Index u, Index v) {
              Index su = sub.at(u);
              Index count = v - u + 1;
              Seq lo1 = max_of({Seq::fixed(s - xn.ex_l), Seq::arith(s - xn.exc_l - p * u, -p), Seq::fixed(s - xb.ex_l),
                                Seq::arith(s - xb.exc_l - p * u, -p)});
              for (const BatchUpdate& upd : reduce_interval_sequence(lo1, Seq::fixed(s), count)) {
                ranks_.apply(now, upd, dir);
              }
              Seq lo2 = max_of({Seq::arith(su - xn.ex_l, p), Seq::fixed(sub.a - xn.exc_l), Seq::arith(su - xb.ex_l, p),
                                Seq::fixed(sub.a - xb.exc_l)});
              for (const BatchUpdate& upd : reduce_interval_sequence(lo2, Seq::arith(su, p), count)) {
                ranks_.apply(now, upd, -dir);
              }
            });
      }
    }
  }
}

}  // namespace dynsa
