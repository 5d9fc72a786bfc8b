#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dynsa/common.hpp"
#include "dynsa/rangetree.hpp"

namespace dynsa {

// Range add, point read over [1..n] (Fenwick tree on differences).
class IntervalStore {
 public:
  explicit IntervalStore(Index n = 0) : tree_(static_cast<std::size_t>(n) + 2, 0) {}

  Index size() const { return static_cast<Index>(tree_.size()) - 2; }
  void add(Index i, Index j, std::int64_t x);
  std::int64_t read(Index i) const;

 private:
  void bump(Index i, std::int64_t x);
  std::vector<std::int64_t> tree_;
};

enum class Orientation { Decreasing, Increasing };

// Adds sign * t to the t-th width-p step of [i..j]. Decreasing stairs count
// steps from j leftwards, increasing stairs from i rightwards.
struct StairsUpdate {
  Index i = 1;
  Index j = 1;
  Index p = 1;
  Orientation orientation = Orientation::Decreasing;
  int sign = 1;

  Index steps() const { return (j - i + p) / p; }
  bool operator==(const StairsUpdate&) const = default;
};

struct IntervalAdd {
  Index i = 1;
  Index j = 1;
  std::int64_t amount = 0;
  bool operator==(const IntervalAdd&) const = default;
};

using BatchUpdate = std::variant<StairsUpdate, IntervalAdd>;

// Value the stairs update adds at x (0 outside [i..j]).
std::int64_t stairs_value(const StairsUpdate& u, Index x);

// Stairs updates of one fixed width p over [1..capacity].
//
// A decreasing update (i, j) is stored as the point (i, j) with value
// ceil(j / p) in a 2-d structure O and as the point (i, j, j mod p) in a
// 3-d structure R3, where a residue of 0 is stored as p. Writing
// x = q * p + r with r in [1..p], the updates covering x contribute
// sum(ceil(j / p)) - count * q - #{residue < r}. Increasing updates are
// decreasing ones on the reflected index capacity + 1 - x, and negative
// updates live in separate structures that are subtracted.
class FixedWidthStairsStore {
 public:
  FixedWidthStairsStore(Index p, Index capacity);
  FixedWidthStairsStore(Index p, Index capacity, double flush_factor);

  Index period() const { return p_; }
  Index capacity() const { return capacity_; }
  std::size_t stored_updates() const { return stored_; }
  std::size_t flushes() const { return flushes_; }

  void apply(const StairsUpdate& u);
  std::int64_t read(Index x) const;
  // Sets the value at x to 0 and returns the value it had.
  std::int64_t zero_index(Index x);

 private:
  struct SubStore {
    RangeTree o{2};
    RangeTree r3{3};
    std::int64_t read(Index x, Index p) const;
  };

  SubStore& sub(Orientation o, int sign);
  void flush();

  Index p_;
  Index capacity_;
  double flush_factor_;
  std::array<std::unique_ptr<SubStore>, 4> subs_;
  IntervalStore flushed_;
  std::unordered_map<Index, std::int64_t> offsets_;
  std::size_t stored_ = 0;
  std::size_t flushes_ = 0;
};

// Sequence t -> value built from constants and arithmetic progressions with
// one shared difference, combined by min and max.
class PNormalSeq {
 public:
  static PNormalSeq fixed(Index c);
  static PNormalSeq arith(Index b0, Index difference);
  static PNormalSeq min(const PNormalSeq& a, const PNormalSeq& b);
  static PNormalSeq max(const PNormalSeq& a, const PNormalSeq& b);

  Index at(Index t) const;
  int degree() const;
  // Shared difference of the arithmetic leaves, 0 when there are none.
  // Throws InvalidArgument when leaves disagree.
  Index difference() const;

  enum class Kind { Fixed, Arith, Min, Max };
  struct Node {
    Kind kind = Kind::Fixed;
    Index a = 0;
    Index d = 0;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };
  const std::shared_ptr<const Node>& root() const { return root_; }
  explicit PNormalSeq(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

 private:
  std::shared_ptr<const Node> root_;
};

// Rewrites the interval adds (i_t, j_t, +1), t in [0..count-1], as a
// constant number of stairs and interval updates with the same combined
// effect. Empty intervals (i_t > j_t) contribute nothing. Output lists
// stairs updates first, each group sorted by i.
std::vector<BatchUpdate> reduce_interval_sequence(const PNormalSeq& i_seq, const PNormalSeq& j_seq, Index count);

}  // namespace dynsa
