#include "dynsa/occindex.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace dynsa {

namespace {

std::uint32_t next_priority(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return static_cast<std::uint32_t>((z ^ (z >> 31)) >> 32);
}

// Compares the new-text word at pos with the old-text word at j, both of
// length len. The old word is read through the new text in at most three
// pieces, so this costs at most three LCE calls.
int compare_with_old_word(const DualView& dual, const EditOp& op, Index pos, Index j, Index len) {
  struct Piece {
    Index from;  // new-text start, or 0 for a literal old symbol
    Index len;
    int symbol;
  };
  Index end = j + len - 1;
  Index x = op.position;
  std::vector<Piece> pieces;
  auto same = [&](Index lo, Index hi, Index shift) {
    if (lo <= hi) pieces.push_back({lo + shift, hi - lo + 1, 0});
  };
  auto literal = [&](Index q) {
    if (q >= j && q <= end) pieces.push_back({0, 1, dual.old_view.at(q)});
  };
  switch (op.kind) {
    case EditKind::Substitute:
      same(j, std::min(end, x - 1), 0);
      literal(x);
      same(std::max(j, x + 1), end, 0);
      break;
    case EditKind::Insert:
      same(j, std::min(end, x), 0);
      same(std::max(j, x + 1), end, 1);
      break;
    case EditKind::Delete:
      same(j, std::min(end, x - 1), 0);
      literal(x);
      same(std::max(j, x + 1), end, -1);
      break;
  }
  const TextView& text = dual.new_view;
  Index off = 0;
  for (const Piece& piece : pieces) {
    Index a0 = pos + off;
    if (piece.from == 0) {
      int a = text.at(a0);
      if (a != piece.symbol) return a < piece.symbol ? -1 : 1;
    } else {
      Index l = a0 == piece.from ? piece.len : std::min(piece.len, text.lcp_or0(a0, piece.from));
      if (l < piece.len) {
        int a = text.at(a0 + l);
        int b = text.at(piece.from + l);
        if (a != b) return a < b ? -1 : 1;
        return 0;  // both words ran past the end of the text
      }
    }
    off += piece.len;
  }
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// PositionLedger

PositionLedger::PositionLedger(Index n) : nodes_(1) {
  nodes_.reserve(static_cast<std::size_t>(n) + 1);
  for (Index i = 0; i < n; ++i) root_ = merge(root_, make());
  if (root_) nodes_[root_].parent = 0;
}

Index PositionLedger::size() const { return root_ ? nodes_[root_].size : 0; }

std::int32_t PositionLedger::make() {
  std::int32_t t;
  if (!free_.empty()) {
    t = free_.back();
    free_.pop_back();
    nodes_[t] = Node{};
  } else {
    t = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
  }
  nodes_[t].size = 1;
  nodes_[t].priority = next_priority(rng_);
  return t;
}

void PositionLedger::pull(std::int32_t t) {
  Node& n = nodes_[t];
  n.size = 1;
  if (n.left) {
    n.size += nodes_[n.left].size;
    nodes_[n.left].parent = t;
  }
  if (n.right) {
    n.size += nodes_[n.right].size;
    nodes_[n.right].parent = t;
  }
}

void PositionLedger::split(std::int32_t t, Index k, std::int32_t& a, std::int32_t& b) {
  if (!t) {
    a = b = 0;
    return;
  }
  Index left_size = nodes_[t].left ? nodes_[nodes_[t].left].size : 0;
  if (k <= left_size) {
    split(nodes_[t].left, k, a, nodes_[t].left);
    pull(t);
    b = t;
  } else {
    split(nodes_[t].right, k - left_size - 1, nodes_[t].right, b);
    pull(t);
    a = t;
  }
  if (a) nodes_[a].parent = 0;
  if (b) nodes_[b].parent = 0;
}

std::int32_t PositionLedger::merge(std::int32_t a, std::int32_t b) {
  if (!a || !b) return a ? a : b;
  if (nodes_[a].priority > nodes_[b].priority) {
    nodes_[a].right = merge(nodes_[a].right, b);
    pull(a);
    return a;
  }
  nodes_[b].left = merge(a, nodes_[b].left);
  pull(b);
  return b;
}

PositionLedger::Token PositionLedger::token_at(Index pos) const {
  if (pos < 1 || pos > size()) throw OutOfRange("ledger position " + std::to_string(pos) + " outside [1.." +
                                               std::to_string(size()) + "]");
  std::int32_t t = root_;
  while (true) {
    ++op_counters().tree_steps;
    Index left_size = nodes_[t].left ? nodes_[nodes_[t].left].size : 0;
    if (pos <= left_size) {
      t = nodes_[t].left;
    } else if (pos == left_size + 1) {
      return t;
    } else {
      pos -= left_size + 1;
      t = nodes_[t].right;
    }
  }
}

Index PositionLedger::position_of(Token t) const {
  Index r = (nodes_[t].left ? nodes_[nodes_[t].left].size : 0) + 1;
  while (nodes_[t].parent) {
    ++op_counters().tree_steps;
    std::int32_t p = nodes_[t].parent;
    if (nodes_[p].right == t) r += (nodes_[p].left ? nodes_[nodes_[p].left].size : 0) + 1;
    t = p;
  }
  return r;
}

PositionLedger::Token PositionLedger::insert_at(Index pos) {
  if (pos < 1 || pos > size() + 1) throw OutOfRange("ledger insert position " + std::to_string(pos));
  std::int32_t a, b;
  split(root_, pos - 1, a, b);
  Token t = make();
  root_ = merge(merge(a, t), b);
  nodes_[root_].parent = 0;
  return t;
}

void PositionLedger::erase_at(Index pos) {
  if (pos < 1 || pos > size()) throw OutOfRange("ledger erase position " + std::to_string(pos));
  std::int32_t a, rest, mid, b;
  split(root_, pos - 1, a, rest);
  split(rest, 1, mid, b);
  free_.push_back(mid);
  root_ = merge(a, b);
  if (root_) nodes_[root_].parent = 0;
}

// ---------------------------------------------------------------------------
// KWordsTree

KWordsTree::KWordsTree(TextView text, Index k)
    : k_(k), ledger_(std::make_unique<PositionLedger>(text.size())), nodes_(1) {
  if (k < 1) throw InvalidArgument("word length must be positive, got " + std::to_string(k));
  for (Index pos = 1; pos <= text.size(); ++pos) {
    NodeCmp cmp = [&](NodeId v) { return text.word_cmp(pos, ledger_->position_of(*nodes_[v].occ.begin()), k_); };
    attach(pos, locate_from(0, cmp));
  }
}

KWordsTree::NodeId KWordsTree::new_node() {
  NodeId v;
  if (!free_nodes_.empty()) {
    v = free_nodes_.back();
    free_nodes_.pop_back();
  } else {
    v = static_cast<NodeId>(nodes_.size());
    nodes_.emplace_back();
  }
  Node& n = nodes_[v];
  n.left = n.right = n.parent = 0;
  n.priority = next_priority(rng_);
  n.total = 0;
  n.occ = std::set<PositionLedger::Token, ByPosition>(ByPosition{ledger_.get()});
  n.period = 0;
  n.live = true;
  ++live_nodes_;
  return v;
}

void KWordsTree::pull(NodeId v) {
  Node& n = nodes_[v];
  n.total = total(n.left) + total(n.right) + static_cast<Index>(n.occ.size());
}

void KWordsTree::rotate_up(NodeId v) {
  NodeId p = nodes_[v].parent;
  NodeId g = nodes_[p].parent;
  if (nodes_[p].left == v) {
    NodeId mid = nodes_[v].right;
    nodes_[p].left = mid;
    if (mid) nodes_[mid].parent = p;
    nodes_[v].right = p;
  } else {
    NodeId mid = nodes_[v].left;
    nodes_[p].right = mid;
    if (mid) nodes_[mid].parent = p;
    nodes_[v].left = p;
  }
  nodes_[p].parent = v;
  nodes_[v].parent = g;
  if (g) {
    if (nodes_[g].left == p) {
      nodes_[g].left = v;
    } else {
      nodes_[g].right = v;
    }
  } else {
    root_ = v;
  }
  pull(p);
  pull(v);
}

void KWordsTree::add_delta(NodeId v, Index delta) {
  for (; v; v = nodes_[v].parent) nodes_[v].total += delta;
}

KWordsTree::NodeId KWordsTree::locate_from(NodeId finger, const NodeCmp& cmp) {
  NodeId u = root_;
  int cu = 0;
  if (finger) {
    int c = cmp(finger);
    if (c == 0) return finger;
    u = finger;
    cu = c;
    // Climb until the word falls inside the key interval of u's subtree.
    while (NodeId p = nodes_[u].parent) {
      bool from_left = nodes_[p].left == u;
      int cp = 0;
      if (from_left == (c > 0)) {
        cp = cmp(p);
        if (cp == 0) return p;
        if ((cp > 0) != (c > 0)) break;
      }
      u = p;
      cu = cp;
    }
  }
  NodeId v = u, parent = 0;
  int side = 0;
  while (v) {
    int c = cu ? cu : cmp(v);
    cu = 0;
    if (c == 0) return v;
    parent = v;
    side = c;
    v = c < 0 ? nodes_[v].left : nodes_[v].right;
  }
  NodeId fresh = new_node();
  nodes_[fresh].parent = parent;
  if (!parent) {
    root_ = fresh;
  } else if (side < 0) {
    nodes_[parent].left = fresh;
  } else {
    nodes_[parent].right = fresh;
  }
  while (nodes_[fresh].parent && nodes_[nodes_[fresh].parent].priority < nodes_[fresh].priority) rotate_up(fresh);
  return fresh;
}

void KWordsTree::attach(Index pos, NodeId v) {
  PositionLedger::Token token = ledger_->token_at(pos);
  nodes_[v].occ.insert(token);
  nodes_[v].period = 0;
  nodes_[v].ghost = 0;
  ledger_->payload(token) = v;
  add_delta(v, 1);
}

KWordsTree::NodeId KWordsTree::remove_position(Index pos, bool keep_empty) {
  PositionLedger::Token token = ledger_->token_at(pos);
  NodeId v = ledger_->payload(token);
  nodes_[v].occ.erase(token);
  nodes_[v].period = 0;
  ledger_->payload(token) = -1;
  add_delta(v, -1);
  if (nodes_[v].occ.empty()) {
    if (keep_empty) {
      nodes_[v].ghost = pos;
    } else {
      erase_node(v);
    }
  }
  return v;
}

void KWordsTree::erase_node(NodeId v) {
  while (nodes_[v].left && nodes_[v].right) {
    NodeId l = nodes_[v].left, r = nodes_[v].right;
    rotate_up(nodes_[l].priority > nodes_[r].priority ? l : r);
  }
  NodeId child = nodes_[v].left ? nodes_[v].left : nodes_[v].right;
  NodeId p = nodes_[v].parent;
  if (child) nodes_[child].parent = p;
  if (!p) {
    root_ = child;
  } else if (nodes_[p].left == v) {
    nodes_[p].left = child;
  } else {
    nodes_[p].right = child;
  }
  nodes_[v].live = false;
  nodes_[v].occ.clear();
  free_nodes_.push_back(v);
  --live_nodes_;
}

void KWordsTree::update_on_edit(const DualView& dual, const EditOp& op) {
  Index n_old = dual.old_view.size();
  Index n_new = dual.new_view.size();
  if (n_old != size()) throw InvalidArgument("words tree is out of sync with the old text version");
  Index x = op.position;
  Index rm_lo = 1, rm_hi = 0, add_lo = 1, add_hi = 0;
  switch (op.kind) {
    case EditKind::Substitute:
      if (n_new != n_old) throw InvalidArgument("substitution changed the text length");
      rm_lo = add_lo = std::max<Index>(1, x - k_ + 1);
      rm_hi = add_hi = x;
      break;
    case EditKind::Insert: {
      if (n_new != n_old + 1) throw InvalidArgument("insertion did not grow the text by one");
      Index y = x + 1;
      rm_lo = add_lo = std::max<Index>(1, y - k_ + 1);
      rm_hi = y - 1;
      add_hi = y;
      break;
    }
    case EditKind::Delete:
      if (n_new + 1 != n_old) throw InvalidArgument("deletion did not shrink the text by one");
      rm_lo = add_lo = std::max<Index>(1, x - k_ + 1);
      rm_hi = x;
      add_hi = x - 1;
      break;
  }
  // A rewritten word keeps its prefix up to the edit, so it usually lands
  // next to its old node; emptied nodes stay as ghosts until the end so
  // that they can serve as search fingers.
  std::vector<NodeId> finger;
  for (Index pos = rm_lo; pos <= rm_hi; ++pos) finger.push_back(remove_position(pos, true));
  if (op.kind == EditKind::Insert) ledger_->insert_at(x + 1);
  if (op.kind == EditKind::Delete) ledger_->erase_at(x);
  TextView text = dual.new_view;
  for (Index pos = add_lo; pos <= add_hi; ++pos) {
    NodeCmp cmp = [&](NodeId v) {
      const Node& node = nodes_[v];
      if (node.occ.empty()) return compare_with_old_word(dual, op, pos, node.ghost, k_);
      return text.word_cmp(pos, ledger_->position_of(*node.occ.begin()), k_);
    };
    NodeId f = pos <= rm_hi ? finger[static_cast<std::size_t>(pos - rm_lo)] : 0;
    attach(pos, locate_from(f, cmp));
  }
  for (NodeId v : finger) {
    if (nodes_[v].live && nodes_[v].occ.empty()) erase_node(v);
  }
}

KWordsTree::NodeId KWordsTree::node_of(Index i) const { return ledger_->payload(ledger_->token_at(i)); }

std::pair<KWordsTree::NodeId, Index> KWordsTree::find_node(Index i) const {
  NodeId v = node_of(i);
  return {v, left_count(v)};
}

std::pair<KWordsTree::NodeId, Index> KWordsTree::findvr(Index rank) const {
  if (rank < 1 || rank > size()) throw OutOfRange("rank " + std::to_string(rank) + " outside [1.." +
                                                 std::to_string(size()) + "]");
  NodeId v = root_;
  while (true) {
    ++op_counters().tree_steps;
    Index l = total(nodes_[v].left);
    if (rank <= l) {
      v = nodes_[v].left;
      continue;
    }
    rank -= l;
    auto c = static_cast<Index>(nodes_[v].occ.size());
    if (rank <= c) return {v, rank};
    rank -= c;
    v = nodes_[v].right;
  }
}

Index KWordsTree::occurrence_count(NodeId v) const { return static_cast<Index>(nodes_[v].occ.size()); }

Index KWordsTree::min_occurrence(NodeId v) const { return ledger_->position_of(*nodes_[v].occ.begin()); }

Index KWordsTree::next_occurrence(NodeId v, Index pos) const {
  auto it = nodes_[v].occ.lower_bound(pos);
  return it == nodes_[v].occ.end() ? 0 : ledger_->position_of(*it);
}

std::vector<Index> KWordsTree::occurrences(NodeId v) const {
  std::vector<Index> out;
  out.reserve(nodes_[v].occ.size());
  for (auto t : nodes_[v].occ) out.push_back(ledger_->position_of(t));
  return out;
}

Index KWordsTree::left_count(NodeId v) const {
  Index sum = total(nodes_[v].left);
  while (nodes_[v].parent) {
    ++op_counters().tree_steps;
    NodeId p = nodes_[v].parent;
    if (nodes_[p].right == v) sum += total(nodes_[p].left) + static_cast<Index>(nodes_[p].occ.size());
    v = p;
  }
  return sum;
}

std::vector<std::pair<std::string, std::vector<Index>>> KWordsTree::dump(TextView text) const {
  std::vector<std::pair<std::string, std::vector<Index>>> out;
  std::vector<NodeId> stack;
  NodeId v = root_;
  while (v || !stack.empty()) {
    while (v) {
      stack.push_back(v);
      v = nodes_[v].left;
    }
    v = stack.back();
    stack.pop_back();
    Index rep = min_occurrence(v);
    out.emplace_back(text.substr(rep, std::min(k_, text.size() - rep + 1)), occurrences(v));
    v = nodes_[v].right;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Periodicity

Run run_with_period(TextView text, Index i, Index p) {
  Index n = text.size();
  if (p < 1 || i < 1 || i + p - 1 > n) {
    throw OutOfRange("window [" + std::to_string(i) + ".." + std::to_string(i + p - 1) + "] outside the text");
  }
  Index start = i - text.lcs_or0(i - 1, i + p - 1);
  Index end = i + p - 1 + text.lcp_or0(i, i + p);
  return Run{start, end, p};
}

bool is_extremely_periodic(const Run& run) { return run.length() >= 5 * run.p; }

std::vector<Run> extreme_runs(TextView text) {
  Index n = text.size();
  std::map<std::pair<Index, Index>, Index> found;
  for (Index p = 1; 5 * p <= n; ++p) {
    // A run of length >= 2p contains a full window starting at some 1 + m*p.
    for (Index i = 1; i + p - 1 <= n; i += p) {
      Run r = run_with_period(text, i, p);
      if (!is_extremely_periodic(r)) continue;
      found.emplace(std::make_pair(r.start, r.end), p);
      // Later windows inside this run report the same run.
      if (r.end - p + 1 > i) i += ((r.end - p + 1 - i) / p) * p;
    }
  }
  std::vector<Run> out;
  out.reserve(found.size());
  for (auto& [range, p] : found) out.push_back(Run{range.first, range.second, p});
  return out;
}

Index smallest_period(TextView text, Index s, Index len) {
  if (len < 1) throw InvalidArgument("period of an empty word");
  if (s < 1 || s + len - 1 > text.size()) throw OutOfRange("word outside the text");
  Index d = 1;
  while (d < len) {
    Index l = std::min(text.lcp(s, s + d), len - d);
    if (l >= len - d) return d;
    d = std::max(d + 1, l + 1);
  }
  return len;
}

// ---------------------------------------------------------------------------
// POR

Index POR::occurrence_count() const {
  Index c = 0;
  for (auto& cl : clusters) c += cl.size();
  return c;
}

POR por(const KWordsTree& tree, TextView text, Index i, bool exact_period) {
  Index x = tree.k();
  Index n = text.size();
  POR out;
  out.s = i;
  out.e = i + x - 1;
  KWordsTree::NodeId v = tree.node_of(i);
  if (tree.occurrence_count(v) == 1) {
    bool padded = out.e > n;
    out.p = x;
    if (exact_period && !padded) {
      out.p = tree.cached_period(v);
      if (!out.p) {
        out.p = smallest_period(text, i, x);
        tree.cache_period(v, out.p);
      }
    }
    out.clusters.push_back(Cluster{i, i, out.p});
    return out;
  }
  Index p = tree.cached_period(v);
  if (!p) {
    p = smallest_period(text, i, x);
    tree.cache_period(v, p);
  }
  out.p = p;
  Index o = tree.min_occurrence(v);
  while (o != 0) {
    Run r = run_with_period(text, o, p);
    Index b = o + ((r.end - (o + x - 1)) / p) * p;
    out.clusters.push_back(Cluster{o, b, p});
    o = tree.next_occurrence(v, b + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cluster comparisons

bool ClusterProgression::is_aligned(Index t) const {
  return std::find(aligned.begin(), aligned.end(), t) != aligned.end();
}

ClusterProgression cluster_lce_progression(TextView text, Index s, Index e, const Cluster& c) {
  Index p = c.p;
  Index x = e - s + 1;
  if (x < p) throw InvalidArgument("word shorter than the cluster period");
  ClusterProgression out;
  out.word_length = x;
  out.ext.ex_l = text.lcs_or0(s - 1, s + p - 1);
  out.ext.ex_r = text.lcp_or0(e + 1, e + 1 - p);
  out.ext.exc_l = text.lcs_or0(c.a - 1, c.a + p - 1);
  out.ext.exc_r = text.lcp_or0(c.a + x, c.a + x - p);
  Index m = c.size();
  Index dl = out.ext.ex_l - out.ext.exc_l;
  if (dl >= 0 && dl % p == 0 && dl / p < m) out.aligned.push_back(dl / p);
  Index dr = out.ext.exc_r - out.ext.ex_r;
  if (dr >= 0 && dr % p == 0 && dr / p < m && (out.aligned.empty() || out.aligned[0] != dr / p)) {
    out.aligned.push_back(dr / p);
  }
  std::sort(out.aligned.begin(), out.aligned.end());
  return out;
}

LexIntervals lex_intervals(TextView text, const Cluster& c, Index s, Index len) {
  Index e = s + len - 1;
  ClusterProgression prog = cluster_lce_progression(text, s, e, c);
  Index m = c.size();
  Index p = c.p;
  Index diff = prog.ext.exc_r - prog.ext.ex_r;
  // Region A: t with exc_r - p t > ex_r; region C: t with exc_r - p t < ex_r.
  Index a_hi = diff > 0 ? (diff - 1) / p : -1;
  Index c_lo = diff >= 0 ? diff / p + 1 : 0;
  Index aligned = (diff >= 0 && diff % p == 0) ? diff / p : -1;
  a_hi = std::min(a_hi, m - 1);

  std::vector<TRange> regions;
  if (a_hi >= 0) regions.push_back(TRange{0, a_hi});
  if (aligned >= 0 && aligned < m) regions.push_back(TRange{aligned, aligned});
  if (c_lo < m) regions.push_back(TRange{c_lo, m - 1});

  LexIntervals out;
  Index less_count = 0, greater_count = 0;
  auto absorb = [](TRange& acc, const TRange& r) {
    if (acc.empty()) {
      acc = r;
    } else {
      acc.lo = std::min(acc.lo, r.lo);
      acc.hi = std::max(acc.hi, r.hi);
    }
  };
  for (const TRange& r : regions) {
    Index st = c.at(r.lo);
    int sign = st == s ? 0 : text.suffix_cmp(st, s);
    if (sign < 0) {
      absorb(out.less, r);
      less_count += r.size();
    } else if (sign > 0) {
      absorb(out.greater, r);
      greater_count += r.size();
    }
  }
  if (out.less.size() != less_count || out.greater.size() != greater_count) {
    throw Error("cluster suffixes are not ordered monotonically around suffix " + std::to_string(s));
  }
  return out;
}

}  // namespace dynsa
