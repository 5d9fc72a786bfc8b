#include <gtest/gtest.h>

#include <random>

#include "dynsa/oracle.hpp"
#include "dynsa/stairs.hpp"

using namespace dynsa;

namespace {

std::vector<std::int64_t> read_all(const FixedWidthStairsStore& s) {
  std::vector<std::int64_t> out;
  for (Index x = 1; x <= s.capacity(); ++x) out.push_back(s.read(x));
  return out;
}

oracle::Stairs to_oracle(const StairsUpdate& u) {
  return {u.i, u.j, u.p, u.orientation == Orientation::Increasing, u.sign};
}

}  // namespace

TEST(IntervalStore, Examples) {
  IntervalStore a(5);
  a.add(2, 4, 1);
  std::vector<std::int64_t> got;
  for (Index i = 1; i <= 5; ++i) got.push_back(a.read(i));
  EXPECT_EQ(got, (std::vector<std::int64_t>{0, 1, 1, 1, 0}));

  IntervalStore b(5);
  b.add(1, 5, 2);
  b.add(3, 3, -2);
  got.clear();
  for (Index i = 1; i <= 5; ++i) got.push_back(b.read(i));
  EXPECT_EQ(got, (std::vector<std::int64_t>{2, 2, 0, 2, 2}));
  EXPECT_THROW(b.add(4, 3, 1), InvalidArgument);
}

TEST(IntervalStore, RandomAddsMatchPlainArray) {
  std::mt19937_64 rng(3);
  const Index n = 500;
  IntervalStore s(n);
  std::vector<std::int64_t> plain(n + 1, 0);
  for (int k = 0; k < n; ++k) {
    Index i = 1 + static_cast<Index>(rng() % n), j = 1 + static_cast<Index>(rng() % n);
    if (i > j) std::swap(i, j);
    std::int64_t x = static_cast<std::int64_t>(rng() % 11) - 5;
    s.add(i, j, x);
    for (Index y = i; y <= j; ++y) plain[y] += x;
  }
  for (Index y = 1; y <= n; ++y) ASSERT_EQ(s.read(y), plain[y]);
}

TEST(Stairs, DecreasingExample) {
  FixedWidthStairsStore s(2, 10);
  s.apply({3, 8, 2, Orientation::Decreasing, 1});
  EXPECT_EQ(read_all(s), (std::vector<std::int64_t>{0, 0, 3, 3, 2, 2, 1, 1, 0, 0}));
  EXPECT_EQ(s.read(4), 3);
  EXPECT_EQ(s.read(7), 1);
  EXPECT_EQ(s.read(9), 0);
  s.apply({1, 8, 2, Orientation::Decreasing, 1});
  EXPECT_EQ(s.read(4), 6);
}

TEST(Stairs, SingleStepIsIntervalAdd) {
  FixedWidthStairsStore s(4, 10);
  s.apply({1, 4, 4, Orientation::Decreasing, 1});
  EXPECT_EQ(read_all(s), (std::vector<std::int64_t>{1, 1, 1, 1, 0, 0, 0, 0, 0, 0}));
}

TEST(Stairs, IncreasingExample) {
  FixedWidthStairsStore s(3, 10);
  s.apply({2, 8, 3, Orientation::Increasing, 1});
  EXPECT_EQ(read_all(s), (std::vector<std::int64_t>{0, 1, 1, 1, 2, 2, 2, 3, 0, 0}));
}

TEST(Stairs, WidthMismatch) {
  FixedWidthStairsStore s(3, 10);
  EXPECT_THROW(s.apply({2, 8, 2, Orientation::Decreasing, 1}), InvalidArgument);
  EXPECT_EQ(s.read(5), 0);
}

TEST(Stairs, ZeroIndex) {
  FixedWidthStairsStore s(2, 10);
  s.apply({3, 8, 2, Orientation::Decreasing, 1});
  EXPECT_EQ(s.zero_index(4), 3);
  EXPECT_EQ(s.read(4), 0);
  EXPECT_EQ(s.read(3), 3);
  EXPECT_EQ(s.zero_index(10), 0);
  s.apply({4, 5, 2, Orientation::Decreasing, 1});
  EXPECT_EQ(s.read(4), 1);
}

struct StairsCase {
  Orientation orientation;
  int sign;
  Index p;
};

class StairsEquivalence : public ::testing::TestWithParam<StairsCase> {};

TEST_P(StairsEquivalence, MatchesPlainArray) {
  auto c = GetParam();
  const Index cap = 120;
  std::mt19937_64 rng(c.p * 31 + c.sign + 7 * static_cast<int>(c.orientation));
  // A low flush factor exercises the epoch rebuild as well.
  FixedWidthStairsStore s(c.p, cap, 2.0);
  std::vector<std::int64_t> plain(cap + 1, 0);
  for (int k = 0; k < 2000; ++k) {
    Index i = 1 + static_cast<Index>(rng() % cap), j = 1 + static_cast<Index>(rng() % cap);
    if (i > j) std::swap(i, j);
    // Mix orientations and signs around the case under test.
    StairsUpdate u{i, j, c.p, c.orientation, c.sign};
    if (rng() % 4 == 0) u.orientation = u.orientation == Orientation::Increasing ? Orientation::Decreasing
                                                                                 : Orientation::Increasing;
    if (rng() % 4 == 0) u.sign = -u.sign;
    s.apply(u);
    oracle::naive_stairs(plain, to_oracle(u));
    if (rng() % 16 == 0) {
      Index z = 1 + static_cast<Index>(rng() % cap);
      ASSERT_EQ(s.zero_index(z), plain[z]);
      plain[z] = 0;
    }
    Index x = 1 + static_cast<Index>(rng() % cap);
    ASSERT_EQ(s.read(x), plain[x]) << "update " << k;
  }
  for (Index x = 1; x <= cap; ++x) ASSERT_EQ(s.read(x), plain[x]);
  EXPECT_GT(s.flushes(), 0u);
}

INSTANTIATE_TEST_SUITE_P(
    Variants, StairsEquivalence,
    ::testing::Values(StairsCase{Orientation::Decreasing, 1, 1}, StairsCase{Orientation::Decreasing, -1, 2},
                      StairsCase{Orientation::Increasing, 1, 3}, StairsCase{Orientation::Increasing, -1, 7},
                      StairsCase{Orientation::Decreasing, 1, 50}, StairsCase{Orientation::Increasing, 1, 50}));

// ---------------------------------------------------------------------------
// reduce_interval_sequence

namespace {

// Applies the reduction to a plain array indexed from lo.
std::vector<std::int64_t> apply_batch(const std::vector<BatchUpdate>& ups, Index lo, Index hi) {
  std::vector<std::int64_t> a(hi - lo + 1, 0);
  for (auto& u : ups) {
    if (auto* s = std::get_if<StairsUpdate>(&u)) {
      EXPECT_GE(s->i, lo);
      EXPECT_LE(s->j, hi);
      for (Index x = s->i; x <= s->j; ++x) a[x - lo] += stairs_value(*s, x);
    } else {
      auto& iv = std::get<IntervalAdd>(u);
      EXPECT_GE(iv.i, lo);
      EXPECT_LE(iv.j, hi);
      for (Index x = iv.i; x <= iv.j; ++x) a[x - lo] += iv.amount;
    }
  }
  return a;
}

std::vector<std::int64_t> explicit_adds(const PNormalSeq& I, const PNormalSeq& J, Index count, Index lo, Index hi) {
  std::vector<std::int64_t> a(hi - lo + 1, 0);
  for (Index t = 0; t < count; ++t) {
    for (Index x = I.at(t); x <= J.at(t); ++x) a[x - lo] += 1;
  }
  return a;
}

PNormalSeq random_seq(std::mt19937_64& rng, int degree, Index d) {
  if (degree == 1) {
    Index a = static_cast<Index>(rng() % 61) - 20;
    return rng() % 2 ? PNormalSeq::fixed(a) : PNormalSeq::arith(a, d);
  }
  int left = 1 + static_cast<int>(rng() % (degree - 1));
  auto l = random_seq(rng, left, d);
  auto r = random_seq(rng, degree - left, d);
  return rng() % 2 ? PNormalSeq::min(l, r) : PNormalSeq::max(l, r);
}

}  // namespace

TEST(Reduce, FixedFixed) {
  auto out = reduce_interval_sequence(PNormalSeq::fixed(2), PNormalSeq::fixed(6), 3);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(std::get<IntervalAdd>(out[0]), (IntervalAdd{2, 6, 3}));
}

TEST(Reduce, FixedArithmetic) {
  auto I = PNormalSeq::fixed(1);
  auto J = PNormalSeq::arith(4, 2);
  auto out = reduce_interval_sequence(I, J, 3);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(std::get<StairsUpdate>(out[0]), (StairsUpdate{4, 8, 2, Orientation::Decreasing, 1}));
  EXPECT_EQ(std::get<IntervalAdd>(out[1]), (IntervalAdd{1, 3, 3}));
  EXPECT_EQ(apply_batch(out, 0, 10), explicit_adds(I, J, 3, 0, 10));
}

TEST(Reduce, MaxSplit) {
  auto I = PNormalSeq::max(PNormalSeq::fixed(5), PNormalSeq::arith(1, 2));
  auto J = PNormalSeq::arith(9, 2);
  auto out = reduce_interval_sequence(I, J, 4);
  EXPECT_EQ(apply_batch(out, 0, 20), explicit_adds(I, J, 4, 0, 20));
  EXPECT_TRUE(reduce_interval_sequence(I, J, 0).empty());
}

TEST(Reduce, MixedDifferencesRejected) {
  EXPECT_THROW(reduce_interval_sequence(PNormalSeq::arith(1, 2), PNormalSeq::arith(5, 3), 3), InvalidArgument);
  EXPECT_THROW(PNormalSeq::min(PNormalSeq::arith(1, 2), PNormalSeq::arith(5, 3)).difference(), InvalidArgument);
}

TEST(Reduce, RandomTreesMatchExplicitApplication) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    Index p = 1 + static_cast<Index>(rng() % 5);
    Index d = rng() % 2 ? p : -p;
    auto I = random_seq(rng, 1 + static_cast<int>(rng() % 4), d);
    auto J = random_seq(rng, 1 + static_cast<int>(rng() % 4), d);
    Index count = static_cast<Index>(rng() % 13);
    Index lo = 0, hi = 0;
    bool any = false;
    for (Index t = 0; t < count; ++t) {
      if (I.at(t) > J.at(t)) continue;
      lo = any ? std::min(lo, I.at(t)) : I.at(t);
      hi = any ? std::max(hi, J.at(t)) : J.at(t);
      any = true;
    }
    auto out = reduce_interval_sequence(I, J, count);
    if (!any) {
      // Nothing may be touched when every interval is empty.
      for (auto& u : out) {
        if (auto* iv = std::get_if<IntervalAdd>(&u)) ADD_FAILURE() << "interval " << iv->i << ".." << iv->j;
        if (auto* s = std::get_if<StairsUpdate>(&u)) ADD_FAILURE() << "stairs " << s->i << ".." << s->j;
      }
      continue;
    }
    // apply_batch also checks that every update stays inside [lo..hi].
    ASSERT_EQ(apply_batch(out, lo, hi), explicit_adds(I, J, count, lo, hi)) << "trial " << trial;
  }
}
