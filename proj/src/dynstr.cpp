#include "dynsa/dynstr.hpp"

#include <algorithm>
#include <random>

namespace dynsa {

namespace {

constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kMod);
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t s = lo + hi;
  return s >= kMod ? s - kMod : s;
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kMod ? s - kMod : s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kMod - b; }

std::uint64_t hash_base() {
  static const std::uint64_t base = [] {
    std::random_device rd;
    std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::uint64_t> dist(std::uint64_t{1} << 20, kMod - 2);
    return dist(gen);
  }();
  return base;
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Alphabet Alphabet::of(std::string_view symbols) {
  Alphabet a;
  a.set_.reset();
  for (char c : symbols) a.set_.set(static_cast<Symbol>(c));
  return a;
}

std::string Alphabet::symbols() const {
  std::string out;
  for (int c = 0; c < 256; ++c) {
    if (set_.test(c)) out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string to_string(const EditOp& op) {
  switch (op.kind) {
    case EditKind::Substitute:
      return "sub " + std::to_string(op.position) + " " + std::string(1, static_cast<char>(op.symbol));
    case EditKind::Insert:
      return "ins " + std::to_string(op.position) + " " + std::string(1, static_cast<char>(op.symbol));
    case EditKind::Delete:
      return "del " + std::to_string(op.position);
  }
  return {};
}

// ---------------------------------------------------------------------------
// DynamicString

DynamicString::DynamicString(std::string_view text, Alphabet alphabet)
    : rng_state_(0x5EEDu), alphabet_(alphabet) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!alphabet_.contains(static_cast<Symbol>(text[i]))) {
      throw InvalidArgument("symbol outside alphabet at position " + std::to_string(i + 1));
    }
  }
  nodes_.reserve(2 * text.size() + 16);
  nodes_.emplace_back();  // slot 0 is the empty tree
  ensure_powers(static_cast<Index>(text.size()));
  root_ = build(text);
  old_root_ = root_;
}

void DynamicString::ensure_powers(Index n) {
  if (powers_.empty()) powers_.push_back(1);
  while (static_cast<Index>(powers_.size()) <= n + 1) {
    powers_.push_back(mul_mod(powers_.back(), hash_base()));
  }
}

std::int32_t DynamicString::make_leaf(Symbol c) {
  Node node;
  node.priority = static_cast<std::uint32_t>(splitmix(rng_state_));
  node.size = 1;
  node.symbol = c;
  node.hash = static_cast<std::uint64_t>(c) + 1;
  nodes_.push_back(node);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t DynamicString::clone(std::int32_t t) {
  nodes_.push_back(nodes_[t]);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

void DynamicString::pull(std::int32_t t) {
  Node& n = nodes_[t];
  const Node& l = nodes_[n.left];
  const Node& r = nodes_[n.right];
  n.size = l.size + r.size + 1;
  std::uint64_t h = mul_mod(l.hash, powers_[r.size + 1]);
  h = add_mod(h, mul_mod(static_cast<std::uint64_t>(n.symbol) + 1, powers_[r.size]));
  n.hash = add_mod(h, r.hash);
}

std::int32_t DynamicString::build(std::string_view text) {
  // Cartesian tree over random priorities, built left to right with a stack.
  std::vector<std::int32_t> stack;
  for (char ch : text) {
    std::int32_t t = make_leaf(static_cast<Symbol>(ch));
    std::int32_t last = 0;
    while (!stack.empty() && nodes_[stack.back()].priority < nodes_[t].priority) {
      last = stack.back();
      stack.pop_back();
    }
    nodes_[t].left = last;
    if (!stack.empty()) nodes_[stack.back()].right = t;
    stack.push_back(t);
  }
  if (stack.empty()) return 0;
  // Recompute aggregates bottom-up in post order.
  std::int32_t root = stack.front();
  std::vector<std::pair<std::int32_t, bool>> work{{root, false}};
  while (!work.empty()) {
    auto [t, done] = work.back();
    work.pop_back();
    if (t == 0) continue;
    if (done) {
      pull(t);
    } else {
      work.push_back({t, true});
      work.push_back({nodes_[t].left, false});
      work.push_back({nodes_[t].right, false});
    }
  }
  return root;
}

std::int32_t DynamicString::assign(std::int32_t t, Index pos, Symbol c) {
  std::int32_t u = clone(t);
  Index ls = size_of(nodes_[u].left);
  if (pos <= ls) {
    std::int32_t child = assign(nodes_[u].left, pos, c);
    nodes_[u].left = child;
  } else if (pos == ls + 1) {
    nodes_[u].symbol = c;
  } else {
    std::int32_t child = assign(nodes_[u].right, pos - ls - 1, c);
    nodes_[u].right = child;
  }
  pull(u);
  return u;
}

void DynamicString::split(std::int32_t t, Index k, std::int32_t& a, std::int32_t& b) {
  if (t == 0) {
    a = b = 0;
    return;
  }
  std::int32_t u = clone(t);
  Index ls = size_of(nodes_[u].left);
  if (k <= ls) {
    std::int32_t l = 0;
    split(nodes_[u].left, k, a, l);
    nodes_[u].left = l;
    pull(u);
    b = u;
  } else {
    std::int32_t r = 0;
    split(nodes_[u].right, k - ls - 1, r, b);
    nodes_[u].right = r;
    pull(u);
    a = u;
  }
}

std::int32_t DynamicString::merge(std::int32_t a, std::int32_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  if (nodes_[a].priority > nodes_[b].priority) {
    std::int32_t u = clone(a);
    std::int32_t r = merge(nodes_[u].right, b);
    nodes_[u].right = r;
    pull(u);
    return u;
  }
  std::int32_t u = clone(b);
  std::int32_t l = merge(a, nodes_[u].left);
  nodes_[u].left = l;
  pull(u);
  return u;
}

void DynamicString::check(const EditOp& op) const {
  Index n = size();
  switch (op.kind) {
    case EditKind::Substitute:
      if (op.position < 1 || op.position > n) {
        throw OutOfRange("substitution position " + std::to_string(op.position) + " outside [1.." +
                         std::to_string(n) + "]");
      }
      if (char_at(op.position) == op.symbol) {
        throw InvalidArgument("trivial substitution at position " + std::to_string(op.position));
      }
      break;
    case EditKind::Insert:
      if (op.position < 0 || op.position > n) {
        throw OutOfRange("insert position " + std::to_string(op.position) + " outside [0.." +
                         std::to_string(n) + "]");
      }
      break;
    case EditKind::Delete:
      if (op.position < 1 || op.position > n) {
        throw OutOfRange("delete position " + std::to_string(op.position) + " outside [1.." +
                         std::to_string(n) + "]");
      }
      break;
  }
  if (op.kind != EditKind::Delete && !alphabet_.contains(op.symbol)) {
    throw InvalidArgument("symbol outside alphabet at position " + std::to_string(op.position));
  }
}

DualView DynamicString::apply(const EditOp& op) {
  if (pending_) throw Error("an edit is already pending; commit it first");
  check(op);
  ensure_powers(size() + 1);
  old_root_ = root_;
  switch (op.kind) {
    case EditKind::Substitute:
      root_ = assign(root_, op.position, op.symbol);
      break;
    case EditKind::Insert: {
      std::int32_t a = 0, b = 0;
      split(root_, op.position, a, b);
      root_ = merge(merge(a, make_leaf(op.symbol)), b);
      break;
    }
    case EditKind::Delete: {
      std::int32_t a = 0, mid = 0, b = 0, rest = 0;
      split(root_, op.position - 1, a, rest);
      split(rest, 1, mid, b);
      root_ = merge(a, b);
      break;
    }
  }
  pending_ = true;
  ++version_;
  return DualView{TextView(this, old_root_), TextView(this, root_)};
}

void DynamicString::commit() {
  if (!pending_) return;
  pending_ = false;
  old_root_ = root_;
  if (static_cast<Index>(nodes_.size()) > 3 * size() + 1024) compact();
}

std::int32_t DynamicString::copy_into(std::vector<Node>& out, std::int32_t t) const {
  if (t == 0) return 0;
  std::int32_t l = copy_into(out, nodes_[t].left);
  std::int32_t r = copy_into(out, nodes_[t].right);
  out.push_back(nodes_[t]);
  out.back().left = l;
  out.back().right = r;
  return static_cast<std::int32_t>(out.size() - 1);
}

void DynamicString::compact() {
  std::vector<Node> fresh;
  fresh.reserve(2 * static_cast<std::size_t>(size()) + 16);
  fresh.emplace_back();
  root_ = copy_into(fresh, root_);
  old_root_ = root_;
  nodes_ = std::move(fresh);
}

// ---------------------------------------------------------------------------
// TextView

Index TextView::size() const { return owner_ ? owner_->size_of(root_) : 0; }

Symbol TextView::char_at(Index i) const {
  if (i < 1 || i > size()) {
    throw OutOfRange("position " + std::to_string(i) + " outside [1.." + std::to_string(size()) + "]");
  }
  return static_cast<Symbol>(at(i));
}

int TextView::at(Index i) const {
  if (i < 1 || i > size()) return -1;
  const auto& nodes = owner_->nodes_;
  std::int32_t t = root_;
  while (true) {
    Index ls = nodes[nodes[t].left].size;
    if (i <= ls) {
      t = nodes[t].left;
    } else if (i == ls + 1) {
      return nodes[t].symbol;
    } else {
      i -= ls + 1;
      t = nodes[t].right;
    }
  }
}

std::uint64_t TextView::prefix_hash(Index i) const {
  const auto& nodes = owner_->nodes_;
  const auto& pw = owner_->powers_;
  std::uint64_t h = 0;
  std::int32_t t = root_;
  while (i > 0 && t != 0) {
    const auto& node = nodes[t];
    Index ls = nodes[node.left].size;
    if (i <= ls) {
      t = node.left;
      continue;
    }
    // Take the whole left subtree and this node's symbol.
    h = add_mod(mul_mod(h, pw[ls]), nodes[node.left].hash);
    h = add_mod(mul_mod(h, pw[1]), static_cast<std::uint64_t>(node.symbol) + 1);
    i -= ls + 1;
    t = node.right;
  }
  return h;
}

// Fingerprint of S[from..from+len-1] given before = prefix_hash(from - 1).
std::uint64_t TextView::range_hash(Index from, Index len, std::uint64_t before) const {
  std::uint64_t upto = prefix_hash(from + len - 1);
  return sub_mod(upto, mul_mod(before, owner_->powers_[len]));
}

Index TextView::lcp_unchecked(Index i, Index j) const {
  ++op_counters().lce_calls;
  Index n = size();
  if (i == j) return n - i + 1;
  Index max_len = n - std::max(i, j) + 1;
  if (max_len <= 0 || at(i) != at(j)) return 0;
  std::uint64_t hi0 = prefix_hash(i - 1);
  std::uint64_t hj0 = prefix_hash(j - 1);
  auto same = [&](Index len) { return range_hash(i, len, hi0) == range_hash(j, len, hj0); };
  // Galloping search for the first mismatching length, then bisection.
  Index good = 1;
  Index step = 1;
  Index bad = max_len + 1;
  while (true) {
    Index probe = good + step;
    if (probe >= bad) break;
    if (probe > max_len) {
      probe = max_len;
      if (probe <= good) break;
    }
    if (same(probe)) {
      good = probe;
      step *= 2;
    } else {
      bad = probe;
      break;
    }
  }
  while (bad - good > 1) {
    Index mid = good + (bad - good) / 2;
    if (same(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  // Boundary verification: the symbols right after the common prefix must
  // differ and the last common symbols must agree.
  bool ok = at(i + good - 1) == at(j + good - 1) && (good == max_len || at(i + good) != at(j + good));
  if (!ok) {
    ++op_counters().hash_collisions;
    good = 0;
    while (good < max_len && at(i + good) == at(j + good)) ++good;
  }
  return good;
}

Index TextView::lcs_unchecked(Index i, Index j) const {
  ++op_counters().lce_calls;
  if (i == j) return i;
  Index max_len = std::min(i, j);
  if (max_len <= 0 || at(i) != at(j)) return 0;
  auto same = [&](Index len) {
    return range_hash(i - len + 1, len, prefix_hash(i - len)) == range_hash(j - len + 1, len, prefix_hash(j - len));
  };
  Index good = 1;
  Index step = 1;
  Index bad = max_len + 1;
  while (true) {
    Index probe = good + step;
    if (probe >= bad) break;
    if (probe > max_len) {
      probe = max_len;
      if (probe <= good) break;
    }
    if (same(probe)) {
      good = probe;
      step *= 2;
    } else {
      bad = probe;
      break;
    }
  }
  while (bad - good > 1) {
    Index mid = good + (bad - good) / 2;
    if (same(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  bool ok = at(i - good + 1) == at(j - good + 1) && (good == max_len || at(i - good) != at(j - good));
  if (!ok) {
    ++op_counters().hash_collisions;
    good = 0;
    while (good < max_len && at(i - good) == at(j - good)) ++good;
  }
  return good;
}

Index TextView::lcp(Index i, Index j) const {
  Index n = size();
  if (i < 1 || i > n || j < 1 || j > n) {
    throw OutOfRange("lcp index outside [1.." + std::to_string(n) + "]: " + std::to_string(i) + ", " +
                     std::to_string(j));
  }
  return lcp_unchecked(i, j);
}

Index TextView::lcs(Index i, Index j) const {
  Index n = size();
  if (i < 0 || i > n || j < 0 || j > n) {
    throw OutOfRange("lcs index outside [0.." + std::to_string(n) + "]: " + std::to_string(i) + ", " +
                     std::to_string(j));
  }
  return lcs_unchecked(i, j);
}

Index TextView::lcp_or0(Index i, Index j) const {
  Index n = size();
  if (i < 1 || i > n || j < 1 || j > n) return 0;
  return lcp_unchecked(i, j);
}

Index TextView::lcs_or0(Index i, Index j) const {
  Index n = size();
  if (i < 1 || i > n || j < 1 || j > n) return 0;
  return lcs_unchecked(i, j);
}

int TextView::suffix_cmp(Index i, Index j) const {
  Index n = size();
  if (i < 1 || i > n || j < 1 || j > n) {
    throw OutOfRange("suffix_cmp index outside [1.." + std::to_string(n) + "]");
  }
  if (i == j) return 0;
  Index l = lcp_unchecked(i, j);
  int a = at(i + l);
  int b = at(j + l);
  return a < b ? -1 : (a > b ? 1 : 0);
}

int TextView::word_cmp(Index i, Index j, Index len) const {
  if (i == j) return 0;
  Index l = lcp_or0(i, j);
  if (l >= len) return 0;
  int a = at(i + l);
  int b = at(j + l);
  return a < b ? -1 : (a > b ? 1 : 0);
}

std::string TextView::str() const { return substr(1, size()); }

std::string TextView::substr(Index i, Index len) const {
  std::string out;
  Index n = size();
  for (Index k = i; k < i + len && k <= n; ++k) {
    if (k >= 1) out.push_back(static_cast<char>(at(k)));
  }
  return out;
}

}  // namespace dynsa
