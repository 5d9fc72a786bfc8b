#include "dynsa/rangetree.hpp"

#include <algorithm>
#include <string>

namespace dynsa {

// Static range tree over a fixed set of point ids. Each level sorts its
// ids along one axis; internal nodes of a non-final level own a level for
// the next axis, the final axis keeps prefix sums. Nodes holding at most
// leaf_size ids are scanned directly instead of owning a sub-level.
struct RangeTree::Static {
  struct Node {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t sub = -1;
  };
  struct Level {
    int axis = 0;
    std::vector<Coord> keys;
    std::vector<std::uint32_t> ids;
    std::vector<std::int64_t> prefix;
    std::vector<Node> nodes;
  };

  const std::vector<PointD>* points = nullptr;
  int dim = 0;
  int leaf_size = 16;
  std::vector<Level> levels;
  std::size_t count = 0;

  Static(const std::vector<PointD>& pts, int d, int leaf, std::vector<std::uint32_t> ids)
      : points(&pts), dim(d), leaf_size(leaf), count(ids.size()) {
    build_level(std::move(ids), 0);
  }

  Coord coord(std::uint32_t id, int axis) const { return (*points)[id].coords[axis]; }

  std::int32_t build_level(std::vector<std::uint32_t> ids, int axis) {
    std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
      Coord ca = coord(a, axis), cb = coord(b, axis);
      return ca != cb ? ca < cb : a < b;
    });
    auto index = static_cast<std::int32_t>(levels.size());
    levels.emplace_back();
    {
      Level& lv = levels.back();
      lv.axis = axis;
      lv.keys.reserve(ids.size());
      for (auto id : ids) lv.keys.push_back(coord(id, axis));
      if (axis == dim - 1) {
        lv.prefix.assign(ids.size() + 1, 0);
        for (std::size_t i = 0; i < ids.size(); ++i) lv.prefix[i + 1] = lv.prefix[i] + (*points)[ids[i]].value;
      }
      lv.ids = std::move(ids);
    }
    if (axis < dim - 1 && !levels[index].ids.empty()) {
      build_node(index, 0, static_cast<std::uint32_t>(levels[index].ids.size()));
    }
    return index;
  }

  std::int32_t build_node(std::int32_t level, std::uint32_t lo, std::uint32_t hi) {
    auto node_index = static_cast<std::int32_t>(levels[level].nodes.size());
    levels[level].nodes.push_back(Node{lo, hi, -1, -1, -1});
    if (hi - lo <= static_cast<std::uint32_t>(leaf_size)) return node_index;
    std::vector<std::uint32_t> slice(levels[level].ids.begin() + lo, levels[level].ids.begin() + hi);
    int axis = levels[level].axis;
    std::int32_t sub = build_level(std::move(slice), axis + 1);
    std::uint32_t mid = lo + (hi - lo) / 2;
    std::int32_t left = build_node(level, lo, mid);
    std::int32_t right = build_node(level, mid, hi);
    Node& n = levels[level].nodes[node_index];
    n.sub = sub;
    n.left = left;
    n.right = right;
    return node_index;
  }

  bool inside(std::uint32_t id, const RangeD& r, int from_axis) const {
    for (int a = from_axis; a < dim; ++a) {
      Coord c = coord(id, a);
      if (c < r.lo[a] || c > r.hi[a]) return false;
    }
    return true;
  }

  template <typename Visit>
  void query_level(std::int32_t level, const RangeD& r, Visit&& visit, std::int64_t& cnt, std::int64_t& sum) const {
    const Level& lv = levels[level];
    ++op_counters().range_visits;
    int axis = lv.axis;
    auto lo_it = std::lower_bound(lv.keys.begin(), lv.keys.end(), r.lo[axis]);
    auto hi_it = std::upper_bound(lv.keys.begin(), lv.keys.end(), r.hi[axis]);
    auto L = static_cast<std::uint32_t>(lo_it - lv.keys.begin());
    auto R = static_cast<std::uint32_t>(hi_it - lv.keys.begin());
    if (L >= R) return;
    if (axis == dim - 1) {
      if constexpr (std::is_same_v<std::decay_t<Visit>, std::nullptr_t>) {
        cnt += R - L;
        sum += lv.prefix[R] - lv.prefix[L];
      } else {
        for (std::uint32_t i = L; i < R; ++i) visit(lv.ids[i]);
      }
      return;
    }
    query_node(level, 0, L, R, r, visit, cnt, sum);
  }

  template <typename Visit>
  void query_node(std::int32_t level, std::int32_t node, std::uint32_t L, std::uint32_t R, const RangeD& r,
                  Visit& visit, std::int64_t& cnt, std::int64_t& sum) const {
    const Level& lv = levels[level];
    const Node& nd = lv.nodes[node];
    ++op_counters().range_visits;
    std::uint32_t lo = std::max(nd.lo, L);
    std::uint32_t hi = std::min(nd.hi, R);
    if (lo >= hi) return;
    if (nd.sub >= 0 && lo == nd.lo && hi == nd.hi) {
      query_level(nd.sub, r, visit, cnt, sum);
      return;
    }
    if (nd.left < 0) {
      for (std::uint32_t i = lo; i < hi; ++i) {
        std::uint32_t id = lv.ids[i];
        if (!inside(id, r, lv.axis + 1)) continue;
        if constexpr (std::is_same_v<std::decay_t<Visit>, std::nullptr_t>) {
          ++cnt;
          sum += (*points)[id].value;
        } else {
          visit(id);
        }
      }
      return;
    }
    query_node(level, nd.left, L, R, r, visit, cnt, sum);
    query_node(level, nd.right, L, R, r, visit, cnt, sum);
  }

  void collect(std::vector<std::uint32_t>& out) const {
    if (!levels.empty()) out.insert(out.end(), levels[0].ids.begin(), levels[0].ids.end());
  }
};

RangeTree::RangeTree(int dim, int leaf_size)
    : dim_(dim), leaf_size_(leaf_size), points_(std::make_unique<std::vector<PointD>>()) {
  if (dim < 2 || dim > kMaxDim) throw InvalidArgument("range tree dimension must be 2, 3 or 4");
  if (leaf_size < 1) throw InvalidArgument("range tree leaf size must be positive");
}

RangeTree::~RangeTree() = default;
RangeTree::RangeTree(RangeTree&&) noexcept = default;
RangeTree& RangeTree::operator=(RangeTree&&) noexcept = default;

void RangeTree::add_to(Forest& forest, std::uint32_t id) {
  std::vector<std::uint32_t> carry{id};
  std::size_t level = 0;
  for (; level < forest.size() && forest[level]; ++level) forest[level]->collect(carry);
  if (level == forest.size()) forest.emplace_back();
  for (std::size_t i = 0; i < level; ++i) forest[i].reset();
  forest[level] = std::make_unique<Static>(*points_, dim_, leaf_size_, std::move(carry));
}

RangeTree::Handle RangeTree::insert(std::initializer_list<Coord> coords, std::int64_t value) {
  if (static_cast<int>(coords.size()) != dim_) {
    throw InvalidArgument("point has " + std::to_string(coords.size()) + " coordinates, structure has " +
                          std::to_string(dim_));
  }
  PointD p;
  std::copy(coords.begin(), coords.end(), p.coords.begin());
  p.value = value;
  return insert(p);
}

RangeTree::Handle RangeTree::insert(const PointD& p) {
  ++op_counters().range_updates;
  auto id = static_cast<std::uint32_t>(points_->size());
  points_->push_back(p);
  alive_.push_back(1);
  add_to(stored_, id);
  ++live_;
  ++stored_count_;
  return id;
}

void RangeTree::remove(Handle h) {
  if (!contains(h)) throw InvalidArgument("stale range tree handle " + std::to_string(h));
  ++op_counters().range_updates;
  alive_[h] = 0;
  --live_;
  add_to(removed_, static_cast<std::uint32_t>(h));
  ++removed_count_;
  if (2 * removed_count_ >= stored_count_) rebuild();
}

const PointD& RangeTree::point(Handle h) const {
  if (!contains(h)) throw InvalidArgument("stale range tree handle " + std::to_string(h));
  return (*points_)[h];
}

void RangeTree::rebuild() {
  std::vector<std::uint32_t> ids;
  for (auto& s : stored_) {
    if (s) s->collect(ids);
  }
  std::vector<std::uint32_t> live_ids;
  for (auto id : ids) {
    if (alive_[id]) live_ids.push_back(id);
  }
  std::sort(live_ids.begin(), live_ids.end());
  stored_.clear();
  removed_.clear();
  removed_count_ = 0;
  stored_count_ = live_ids.size();
  // Binary decomposition of the live count, larger trees first.
  std::size_t offset = 0;
  std::size_t remaining = live_ids.size();
  for (int bit = 62; bit >= 0; --bit) {
    std::size_t chunk = std::size_t{1} << bit;
    if (!(remaining & chunk)) continue;
    if (stored_.size() <= static_cast<std::size_t>(bit)) stored_.resize(bit + 1);
    std::vector<std::uint32_t> part(live_ids.begin() + offset, live_ids.begin() + offset + chunk);
    stored_[bit] = std::make_unique<Static>(*points_, dim_, leaf_size_, std::move(part));
    offset += chunk;
    remaining -= chunk;
  }
}

void RangeTree::check(const RangeD& r) const {
  for (int a = 0; a < dim_; ++a) {
    if (r.lo[a] > r.hi[a]) {
      throw InvalidArgument("malformed range on axis " + std::to_string(a) + ": lower bound above upper bound");
    }
  }
}

std::pair<std::int64_t, std::int64_t> RangeTree::count_sum(const RangeD& r) const {
  check(r);
  std::int64_t cnt = 0, sum = 0;
  std::int64_t dead_cnt = 0, dead_sum = 0;
  for (auto& s : stored_) {
    if (s) s->query_level(0, r, nullptr, cnt, sum);
  }
  for (auto& s : removed_) {
    if (s) s->query_level(0, r, nullptr, dead_cnt, dead_sum);
  }
  return {cnt - dead_cnt, sum - dead_sum};
}

std::vector<RangeTree::Handle> RangeTree::report_handles(const RangeD& r) const {
  check(r);
  std::vector<Handle> out;
  std::int64_t unused_cnt = 0, unused_sum = 0;
  auto visit = [&](std::uint32_t id) {
    if (alive_[id]) out.push_back(id);
  };
  for (auto& s : stored_) {
    if (s) s->query_level(0, r, visit, unused_cnt, unused_sum);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointD> RangeTree::report(const RangeD& r) const {
  std::vector<PointD> out;
  for (Handle h : report_handles(r)) out.push_back((*points_)[h]);
  return out;
}

void RangeTree::clear() {
  points_->clear();
  alive_.clear();
  stored_.clear();
  removed_.clear();
  live_ = stored_count_ = removed_count_ = 0;
}

}  // namespace dynsa
