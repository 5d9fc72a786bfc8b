#include "dynsa/stairs.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace dynsa {

namespace {

Index floor_div(Index a, Index b) {
  Index q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Index ceil_div(Index a, Index b) { return -floor_div(-a, b); }

}  // namespace

// ---------------------------------------------------------------------------
// IntervalStore

void IntervalStore::bump(Index i, std::int64_t x) {
  auto n = static_cast<Index>(tree_.size()) - 1;
  for (; i <= n; i += i & -i) {
    tree_[i] += x;
    ++op_counters().range_visits;
  }
}

void IntervalStore::add(Index i, Index j, std::int64_t x) {
  if (i > j) throw InvalidArgument("interval add with i > j: " + std::to_string(i) + " > " + std::to_string(j));
  if (i < 1 || j > size()) {
    throw OutOfRange("interval [" + std::to_string(i) + ".." + std::to_string(j) + "] outside [1.." +
                     std::to_string(size()) + "]");
  }
  ++op_counters().interval_updates;
  bump(i, x);
  bump(j + 1, -x);
}

std::int64_t IntervalStore::read(Index i) const {
  if (i < 1 || i > size()) return 0;
  std::int64_t s = 0;
  for (; i > 0; i -= i & -i) {
    s += tree_[i];
    ++op_counters().range_visits;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Stairs

std::int64_t stairs_value(const StairsUpdate& u, Index x) {
  if (x < u.i || x > u.j) return 0;
  Index t = u.orientation == Orientation::Decreasing ? (u.j - x) / u.p + 1 : (x - u.i) / u.p + 1;
  return u.sign * t;
}

std::int64_t FixedWidthStairsStore::SubStore::read(Index x, Index p) const {
  if (o.empty()) return 0;
  RangeD box;
  box.axis(0, 1, x).axis(1, x, kPosInf);
  auto [count, sum] = o.count_sum(box);
  if (count == 0) return 0;
  Index q = (x - 1) / p;
  Index r = x - q * p;  // r in [1..p]
  std::int64_t below = 0;
  if (r > 1) {
    box.axis(2, 1, r - 1);
    below = r3.count(box);
  }
  return sum - count * q - below;
}

FixedWidthStairsStore::FixedWidthStairsStore(Index p, Index capacity)
    : FixedWidthStairsStore(p, capacity, EpochPolicy::current().stairs_flush) {}

FixedWidthStairsStore::FixedWidthStairsStore(Index p, Index capacity, double flush_factor)
    : p_(p), capacity_(capacity), flush_factor_(flush_factor), flushed_(capacity) {
  if (p < 1) throw InvalidArgument("stairs width must be positive");
  if (capacity < 0) throw InvalidArgument("stairs capacity must be non-negative");
}

FixedWidthStairsStore::SubStore& FixedWidthStairsStore::sub(Orientation o, int sign) {
  std::size_t slot = (o == Orientation::Increasing ? 2 : 0) + (sign < 0 ? 1 : 0);
  if (!subs_[slot]) subs_[slot] = std::make_unique<SubStore>();
  return *subs_[slot];
}

void FixedWidthStairsStore::apply(const StairsUpdate& u) {
  if (u.p != p_) {
    throw InvalidArgument("stairs width " + std::to_string(u.p) + " does not match store width " +
                          std::to_string(p_));
  }
  if (u.i > u.j) throw InvalidArgument("stairs update with i > j");
  if (u.i < 1 || u.j > capacity_) {
    throw OutOfRange("stairs update [" + std::to_string(u.i) + ".." + std::to_string(u.j) + "] outside [1.." +
                     std::to_string(capacity_) + "]");
  }
  if (u.sign != 1 && u.sign != -1) throw InvalidArgument("stairs sign must be +1 or -1");
  ++op_counters().stairs_updates;
  Index i = u.i, j = u.j;
  if (u.orientation == Orientation::Increasing) {
    i = capacity_ + 1 - u.j;
    j = capacity_ + 1 - u.i;
  }
  SubStore& s = sub(u.orientation, u.sign);
  Index residue = j % p_ == 0 ? p_ : j % p_;
  s.o.insert({i, j}, ceil_div(j, p_));
  s.r3.insert({i, j, residue}, 1);
  ++stored_;
  if (static_cast<double>(stored_) > flush_factor_ * static_cast<double>(std::max<Index>(capacity_, 1))) flush();
}

std::int64_t FixedWidthStairsStore::read(Index x) const {
  if (x < 1 || x > capacity_) return 0;
  std::int64_t v = flushed_.read(x);
  Index mirrored = capacity_ + 1 - x;
  if (subs_[0]) v += subs_[0]->read(x, p_);
  if (subs_[1]) v -= subs_[1]->read(x, p_);
  if (subs_[2]) v += subs_[2]->read(mirrored, p_);
  if (subs_[3]) v -= subs_[3]->read(mirrored, p_);
  auto it = offsets_.find(x);
  if (it != offsets_.end()) v -= it->second;
  return v;
}

std::int64_t FixedWidthStairsStore::zero_index(Index x) {
  std::int64_t prev = read(x);
  if (prev != 0) offsets_[x] += prev;
  return prev;
}

void FixedWidthStairsStore::flush() {
  std::vector<std::int64_t> values(static_cast<std::size_t>(capacity_) + 1, 0);
  for (Index x = 1; x <= capacity_; ++x) values[x] = read(x);
  for (auto& s : subs_) s.reset();
  offsets_.clear();
  flushed_ = IntervalStore(capacity_);
  for (Index x = 1; x <= capacity_; ++x) {
    if (values[x] != 0) flushed_.add(x, x, values[x]);
  }
  stored_ = 0;
  ++flushes_;
}

// ---------------------------------------------------------------------------
// PNormalSeq

PNormalSeq PNormalSeq::fixed(Index c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Fixed;
  n->a = c;
  return PNormalSeq(n);
}

PNormalSeq PNormalSeq::arith(Index b0, Index difference) {
  if (difference == 0) return fixed(b0);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Arith;
  n->a = b0;
  n->d = difference;
  return PNormalSeq(n);
}

PNormalSeq PNormalSeq::min(const PNormalSeq& a, const PNormalSeq& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Min;
  n->left = a.root_;
  n->right = b.root_;
  return PNormalSeq(n);
}

PNormalSeq PNormalSeq::max(const PNormalSeq& a, const PNormalSeq& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Max;
  n->left = a.root_;
  n->right = b.root_;
  return PNormalSeq(n);
}

namespace {

using NodePtr = std::shared_ptr<const PNormalSeq::Node>;
using Kind = PNormalSeq::Kind;

Index eval(const NodePtr& n, Index t) {
  switch (n->kind) {
    case Kind::Fixed:
      return n->a;
    case Kind::Arith:
      return n->a + n->d * t;
    case Kind::Min:
      return std::min(eval(n->left, t), eval(n->right, t));
    case Kind::Max:
      return std::max(eval(n->left, t), eval(n->right, t));
  }
  return 0;
}

int leaves(const NodePtr& n) {
  if (n->kind == Kind::Fixed || n->kind == Kind::Arith) return 1;
  return leaves(n->left) + leaves(n->right);
}

void differences(const NodePtr& n, std::vector<Index>& out) {
  if (n->kind == Kind::Arith) {
    out.push_back(n->d);
  } else if (n->kind == Kind::Min || n->kind == Kind::Max) {
    differences(n->left, out);
    differences(n->right, out);
  }
}

bool is_leaf(const NodePtr& n) { return n->kind == Kind::Fixed || n->kind == Kind::Arith; }

// Finds an internal node whose two children are leaves.
const PNormalSeq::Node* find_reducible(const NodePtr& n) {
  if (is_leaf(n)) return nullptr;
  if (is_leaf(n->left) && is_leaf(n->right)) return n.get();
  if (auto* f = find_reducible(n->left)) return f;
  return find_reducible(n->right);
}

NodePtr replace(const NodePtr& n, const PNormalSeq::Node* target, const NodePtr& with) {
  if (n.get() == target) return with;
  if (is_leaf(n)) return n;
  auto l = replace(n->left, target, with);
  auto r = replace(n->right, target, with);
  if (l == n->left && r == n->right) return n;
  auto copy = std::make_shared<PNormalSeq::Node>(*n);
  copy->left = l;
  copy->right = r;
  return copy;
}

struct Reducer {
  std::vector<StairsUpdate> stairs;
  std::vector<IntervalAdd> intervals;

  void interval(Index i, Index j, Index amount) {
    if (i <= j && amount != 0) intervals.push_back({i, j, amount});
  }

  // Both sequences are single leaves on [lo..hi].
  void base(const NodePtr& I, const NodePtr& J, Index lo, Index hi) {
    Index ai = I->a, bi = I->kind == Kind::Arith ? I->d : 0;
    Index aj = J->a, bj = J->kind == Kind::Arith ? J->d : 0;
    if (bi < 0 || bj < 0) {
      if (bi > 0 || bj > 0) throw InvalidArgument("p-normal sequences with mixed differences");
      // Reverse the order of t so that both differences become positive.
      ai += bi * (lo + hi);
      aj += bj * (lo + hi);
      bi = -bi;
      bj = -bj;
    }
    // Re-index so that t runs over [0..count-1].
    ai += bi * lo;
    aj += bj * lo;
    Index count = hi - lo + 1;
    // Keep only t with i_t <= j_t; j_t - i_t is linear in t.
    Index gap = aj - ai;
    Index slope = bj - bi;
    Index first = 0, last = count - 1;
    if (slope == 0) {
      if (gap < 0) return;
    } else if (slope > 0) {
      if (gap < 0) first = ceil_div(-gap, slope);
    } else {
      if (gap < 0) return;
      last = std::min(last, floor_div(gap, -slope));
    }
    if (first > last) return;
    ai += bi * first;
    aj += bj * first;
    count = last - first + 1;
    Index p = std::max(bi, bj);
    Index i_last = ai + bi * (count - 1);
    Index j_last = aj + bj * (count - 1);
    if (bi == 0 && bj == 0) {
      interval(ai, aj, count);
    } else if (bi == 0) {
      stairs.push_back({aj, j_last, p, Orientation::Decreasing, 1});
      interval(ai, aj - 1, count);
    } else if (bj == 0) {
      stairs.push_back({ai, i_last, p, Orientation::Increasing, 1});
      interval(i_last + 1, aj, count);
    } else {
      // Sliding window: steps rise from the left ends and fall after the
      // right ends.
      stairs.push_back({ai, i_last, p, Orientation::Increasing, 1});
      if (count >= 2) stairs.push_back({aj + 1, j_last, p, Orientation::Increasing, -1});
      interval(i_last + 1, j_last, count);
    }
  }

  void run(const NodePtr& I, const NodePtr& J, Index lo, Index hi) {
    if (lo > hi) return;
    bool in_i = !is_leaf(I);
    const NodePtr& tree = in_i ? I : J;
    if (is_leaf(I) && is_leaf(J)) {
      base(I, J, lo, hi);
      return;
    }
    const PNormalSeq::Node* v = find_reducible(tree);
    const NodePtr& x = v->left;
    const NodePtr& y = v->right;
    bool is_max = v->kind == Kind::Max;
    auto recurse = [&](const NodePtr& leaf, Index from, Index to) {
      NodePtr next = replace(tree, v, leaf);
      if (in_i) {
        run(next, J, from, to);
      } else {
        run(I, next, from, to);
      }
    };
    if (x->kind == Kind::Fixed && y->kind == Kind::Fixed) {
      recurse(is_max == (x->a >= y->a) ? x : y, lo, hi);
      return;
    }
    if (x->kind == Kind::Arith && y->kind == Kind::Arith) {
      if (x->d != y->d) throw InvalidArgument("p-normal sequences with mixed differences");
      recurse(is_max == (x->a >= y->a) ? x : y, lo, hi);
      return;
    }
    const NodePtr& fixed = x->kind == Kind::Fixed ? x : y;
    const NodePtr& arith = x->kind == Kind::Fixed ? y : x;
    Index c = fixed->a, b0 = arith->a, d = arith->d;
    // Split [lo..hi] into the part where the progression is below c and the
    // part where it is at least c.
    if (d > 0) {
      Index t_star = ceil_div(c - b0, d);  // arith >= c iff t >= t_star
      recurse(is_max ? fixed : arith, lo, std::min(hi, t_star - 1));
      recurse(is_max ? arith : fixed, std::max(lo, t_star), hi);
    } else {
      Index t_star = floor_div(b0 - c, -d);  // arith >= c iff t <= t_star
      recurse(is_max ? arith : fixed, lo, std::min(hi, t_star));
      recurse(is_max ? fixed : arith, std::max(lo, t_star + 1), hi);
    }
  }
};

}  // namespace

Index PNormalSeq::at(Index t) const { return eval(root_, t); }

int PNormalSeq::degree() const { return leaves(root_); }

Index PNormalSeq::difference() const {
  std::vector<Index> ds;
  differences(root_, ds);
  if (ds.empty()) return 0;
  for (Index d : ds) {
    if (d != ds.front()) throw InvalidArgument("p-normal sequence with mixed differences");
  }
  return ds.front();
}

std::vector<BatchUpdate> reduce_interval_sequence(const PNormalSeq& i_seq, const PNormalSeq& j_seq, Index count) {
  Index di = i_seq.difference();
  Index dj = j_seq.difference();
  if (di != 0 && dj != 0 && di != dj) throw InvalidArgument("p-normal sequences with mixed differences");
  std::vector<BatchUpdate> out;
  if (count <= 0) return out;
  Reducer r;
  r.run(i_seq.root(), j_seq.root(), 0, count - 1);
  auto by_stairs = [](const StairsUpdate& a, const StairsUpdate& b) {
    return std::tie(a.i, a.j, a.sign) < std::tie(b.i, b.j, b.sign);
  };
  auto by_interval = [](const IntervalAdd& a, const IntervalAdd& b) {
    return std::tie(a.i, a.j, a.amount) < std::tie(b.i, b.j, b.amount);
  };
  std::stable_sort(r.stairs.begin(), r.stairs.end(), by_stairs);
  std::stable_sort(r.intervals.begin(), r.intervals.end(), by_interval);
  for (auto& s : r.stairs) out.emplace_back(s);
  for (auto& iv : r.intervals) out.emplace_back(iv);
  return out;
}

}  // namespace dynsa
