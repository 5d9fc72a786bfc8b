#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "dynsa/common.hpp"

namespace dynsa {

using Coord = std::int64_t;

inline constexpr Coord kNegInf = std::numeric_limits<Coord>::min();
inline constexpr Coord kPosInf = std::numeric_limits<Coord>::max();
inline constexpr int kMaxDim = 4;

struct PointD {
  std::array<Coord, kMaxDim> coords{};
  std::int64_t value = 0;
};

// Axis-aligned box of closed intervals. Unset axes span everything.
struct RangeD {
  std::array<Coord, kMaxDim> lo{kNegInf, kNegInf, kNegInf, kNegInf};
  std::array<Coord, kMaxDim> hi{kPosInf, kPosInf, kPosInf, kPosInf};

  RangeD& axis(int a, Coord from, Coord to) {
    lo[a] = from;
    hi[a] = to;
    return *this;
  }
};

// Dynamic orthogonal range structure for 2 to 4 dimensions.
//
// Points live in O(log N) static range trees whose sizes are distinct
// powers of two; an insertion merges equal-sized trees like a binary
// counter. Removed points are inserted into a second structure of the same
// shape and subtracted at query time; once they make up half of the stored
// points everything is rebuilt from the live points.
class RangeTree {
 public:
  using Handle = std::uint64_t;

  explicit RangeTree(int dim, int leaf_size = 16);
  ~RangeTree();
  RangeTree(RangeTree&&) noexcept;
  RangeTree& operator=(RangeTree&&) noexcept;

  int dim() const { return dim_; }
  std::size_t size() const { return live_; }
  bool empty() const { return live_ == 0; }

  Handle insert(std::initializer_list<Coord> coords, std::int64_t value = 0);
  Handle insert(const PointD& p);
  void remove(Handle h);
  bool contains(Handle h) const { return h < alive_.size() && alive_[h]; }
  const PointD& point(Handle h) const;

  std::int64_t count(const RangeD& r) const { return count_sum(r).first; }
  std::int64_t sum(const RangeD& r) const { return count_sum(r).second; }
  std::pair<std::int64_t, std::int64_t> count_sum(const RangeD& r) const;
  std::vector<PointD> report(const RangeD& r) const;
  std::vector<Handle> report_handles(const RangeD& r) const;

  void clear();

 private:
  struct Static;
  using Forest = std::vector<std::unique_ptr<Static>>;

  void add_to(Forest& forest, std::uint32_t id);
  void rebuild();
  void check(const RangeD& r) const;

  int dim_;
  int leaf_size_;
  // Heap-allocated so that the static trees keep a stable reference when
  // the structure is moved.
  std::unique_ptr<std::vector<PointD>> points_;
  std::vector<char> alive_;
  Forest stored_;
  Forest removed_;
  std::size_t live_ = 0;
  std::size_t stored_count_ = 0;
  std::size_t removed_count_ = 0;
};

}  // namespace dynsa
