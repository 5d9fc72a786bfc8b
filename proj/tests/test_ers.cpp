#include <gtest/gtest.h>

#include <map>
#include <random>
#include <string>

#include "dynsa/ers.hpp"
#include "dynsa/oracle.hpp"

using namespace dynsa;

namespace {

std::string random_text(std::mt19937_64& rng, std::size_t n, int sigma) {
  std::string s;
  std::uniform_int_distribution<int> d(0, sigma - 1);
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + d(rng)));
  return s;
}

std::string periodic_text(std::mt19937_64& rng, std::size_t n, std::size_t period, double noise) {
  std::string unit = random_text(rng, period, 2);
  std::string s;
  std::bernoulli_distribution flip(noise);
  for (std::size_t i = 0; i < n; ++i) s.push_back(flip(rng) ? 'c' : unit[i % period]);
  return s;
}

struct Fixture {
  DynamicString text;
  KWordsTree tree;
  SortedOccView view;

  Fixture(const std::string& s, Index start, Index len)
      : text(s), tree(text.view(), len), view(text.view(), por(tree, text.view(), start, true)) {}
};

Index brute_count(const std::string& s, Index start, Index len, Index l, Index r, Index i, Index j) {
  auto all = oracle::naive_A_w(s, start, start + len - 1);
  auto ext = oracle::naive_A_lr(s, start, start + len - 1, l, r);
  Index c = 0;
  for (Index q = i; q <= j; ++q) {
    if (std::find(ext.begin(), ext.end(), all[q - 1]) != ext.end()) ++c;
  }
  return c;
}

// Picks an instance whose word tends to have several occurrences.
struct Instance {
  std::string text;
  Index start;
  Index len;
};

Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::string s;
  std::size_t n = std::uniform_int_distribution<std::size_t>(8, 140)(rng);
  switch (kind(rng)) {
    case 0:
      s = random_text(rng, n, 2);
      break;
    case 1:
      s = random_text(rng, n, 3);
      break;
    case 2:
      s = periodic_text(rng, n, std::uniform_int_distribution<std::size_t>(1, 6)(rng), 0.03);
      break;
    default:
      s = periodic_text(rng, n, std::uniform_int_distribution<std::size_t>(2, 4)(rng), 0.0);
      break;
  }
  auto len = std::uniform_int_distribution<Index>(1, std::min<Index>(12, static_cast<Index>(n)))(rng);
  auto start = std::uniform_int_distribution<Index>(1, static_cast<Index>(n) - len + 1)(rng);
  return {s, start, len};
}

}  // namespace

TEST(SortedOccView, SingleOccurrence) {
  Fixture f("abcdefg", 3, 3);
  EXPECT_EQ(f.view.size(), 1);
  EXPECT_EQ(f.view.select(1), 3);
  EXPECT_EQ(f.view.erc_count(2, 2, 1, 1), 1);
  EXPECT_EQ(f.view.erc_count(2, 3, 1, 1), 0);
  EXPECT_EQ(f.view.erc_count(3, 0, 1, 1), 0);
  EXPECT_EQ(f.view.ers_select(0, 0, 1), 3);
  EXPECT_THROW(f.view.ers_select(0, 5, 1), OutOfRange);
}

TEST(SortedOccView, ClusterRanksExample) {
  Fixture f("BAABBABBABBABBABBABAB", 4, 7);
  ASSERT_EQ(f.view.clusters().size(), 1u);
  EXPECT_EQ(f.view.clusters()[0].cluster, (Cluster{4, 13, 3}));
  std::map<Index, Index> rank_of;
  for (Index i = 1; i <= f.view.size(); ++i) {
    auto info = f.view.locate(i);
    rank_of[info.start] = info.rank;
  }
  EXPECT_EQ(rank_of, (std::map<Index, Index>{{4, 3}, {7, 2}, {10, 1}, {13, 0}}));
}

TEST(SortedOccView, LeftoverRunLengthsExample) {
  Fixture f("bbbababbababbababbababbababaaa", 4, 11);
  ASSERT_EQ(f.view.period(), 5);
  ASSERT_EQ(f.view.clusters().size(), 1u);
  const ClusterMeta& m = f.view.clusters()[0];
  EXPECT_EQ(m.cluster, (Cluster{4, 14, 5}));
  EXPECT_EQ(m.r_left, 2);
  EXPECT_EQ(m.r_right, 3);
}

TEST(SortedOccView, UnaryText) {
  std::string s(12, 'a');
  Fixture f(s, 1, 3);
  auto want = oracle::naive_A_w(s, 1, 3);
  ASSERT_EQ(f.view.size(), static_cast<Index>(want.size()));
  for (Index i = 1; i <= f.view.size(); ++i) EXPECT_EQ(f.view.select(i), want[i - 1]) << i;
  EXPECT_EQ(f.view.decreasing_size(), f.view.size());
}

TEST(SortedOccView, SelectMatchesNaiveOrder) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 400; ++round) {
    Instance in = random_instance(rng);
    Fixture f(in.text, in.start, in.len);
    auto want = oracle::naive_A_w(in.text, in.start, in.start + in.len - 1);
    ASSERT_EQ(f.view.size(), static_cast<Index>(want.size())) << in.text << " " << in.start << " " << in.len;
    for (Index i = 1; i <= f.view.size(); ++i) {
      ASSERT_EQ(f.view.select(i), want[i - 1]) << in.text << " " << in.start << " " << in.len << " i=" << i;
    }
  }
}

TEST(SortedOccView, DecreasingThenIncreasingStructure) {
  // Classify every occurrence independently and check the shape of the
  // naive sorted array: the decreasing class first with ascending ranks,
  // then the increasing class with descending ranks.
  std::mt19937_64 rng(12);
  for (int round = 0; round < 300; ++round) {
    Instance in = random_instance(rng);
    const std::string& s = in.text;
    auto n = static_cast<Index>(s.size());
    std::string w = s.substr(in.start - 1, in.len);
    Index p = oracle::naive_period(w);
    std::string ws = w.substr(w.size() - p);
    auto sorted = oracle::naive_A_w(s, in.start, in.start + in.len - 1);
    int phase = 0;  // 0 decreasing, 1 increasing
    Index prev_rank = -1;
    for (Index o : sorted) {
      Index rank = 0;
      Index pos = o + in.len;
      while (pos + p - 1 <= n && s.compare(pos - 1, p, ws) == 0) {
        ++rank;
        pos += p;
      }
      std::string tail = pos <= n ? s.substr(pos - 1) : std::string();
      bool inc = tail > ws;
      ASSERT_TRUE(tail.compare(0, p, ws) != 0);
      if (inc && phase == 0) {
        phase = 1;
        prev_rank = -1;
      }
      ASSERT_EQ(inc, phase == 1) << s << " word at " << in.start;
      if (prev_rank >= 0) {
        if (phase == 0) {
          ASSERT_GE(rank, prev_rank);
        } else {
          ASSERT_LE(rank, prev_rank);
        }
      }
      prev_rank = rank;
    }
    Fixture f(s, in.start, in.len);
    for (Index i = 1; i <= f.view.size(); ++i) {
      auto info = f.view.locate(i);
      ASSERT_EQ(info.increasing, i > f.view.decreasing_size());
    }
  }
}

TEST(SortedOccView, CountMatchesBruteForce) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 500; ++round) {
    Instance in = random_instance(rng);
    Fixture f(in.text, in.start, in.len);
    Index m = f.view.size();
    for (int probe = 0; probe < 6; ++probe) {
      Index l = std::uniform_int_distribution<Index>(0, std::min<Index>(in.start - 1, 20))(rng);
      Index r = std::uniform_int_distribution<Index>(0, 20)(rng);
      Index i = std::uniform_int_distribution<Index>(1, m)(rng);
      Index j = std::uniform_int_distribution<Index>(i, m)(rng);
      ASSERT_EQ(f.view.erc_count(l, r, i, j), brute_count(in.text, in.start, in.len, l, r, i, j))
          << in.text << " word " << in.start << "+" << in.len << " l=" << l << " r=" << r << " [" << i << ".." << j
          << "]";
    }
  }
}

TEST(SortedOccView, CountIsAdditive) {
  std::mt19937_64 rng(14);
  for (int round = 0; round < 200; ++round) {
    Instance in = random_instance(rng);
    Fixture f(in.text, in.start, in.len);
    Index m = f.view.size();
    if (m < 2) continue;
    Index l = std::uniform_int_distribution<Index>(0, in.start - 1)(rng);
    Index r = std::uniform_int_distribution<Index>(0, 10)(rng);
    Index i = std::uniform_int_distribution<Index>(1, m - 1)(rng);
    Index j = std::uniform_int_distribution<Index>(i + 1, m)(rng);
    Index mid = std::uniform_int_distribution<Index>(i, j - 1)(rng);
    EXPECT_EQ(f.view.erc_count(l, r, i, j), f.view.erc_count(l, r, i, mid) + f.view.erc_count(l, r, mid + 1, j));
  }
}

TEST(SortedOccView, ZeroExtensionsCountEverything) {
  std::mt19937_64 rng(15);
  for (int round = 0; round < 100; ++round) {
    Instance in = random_instance(rng);
    Fixture f(in.text, in.start, in.len);
    Index m = f.view.size();
    EXPECT_EQ(f.view.erc_count(0, 0, 1, m), m);
    EXPECT_EQ(f.view.erc_count(0, static_cast<Index>(in.text.size()) + 1, 1, m), 0);
    for (Index i = 1; i <= m; ++i) EXPECT_EQ(f.view.ers_select(0, 0, i), f.view.select(i));
  }
}

TEST(SortedOccView, ExtendedSelectMatchesNaive) {
  std::mt19937_64 rng(16);
  for (int round = 0; round < 400; ++round) {
    Instance in = random_instance(rng);
    Fixture f(in.text, in.start, in.len);
    Index l = std::uniform_int_distribution<Index>(0, std::min<Index>(in.start - 1, 15))(rng);
    Index r = std::uniform_int_distribution<Index>(0, 15)(rng);
    auto want = oracle::naive_A_lr(in.text, in.start, in.start + in.len - 1, l, r);
    ASSERT_EQ(f.view.extendable_count(l, r), static_cast<Index>(want.size()));
    for (Index i = 1; i <= static_cast<Index>(want.size()); ++i) {
      ASSERT_EQ(f.view.ers_select(l, r, i), want[i - 1])
          << in.text << " word " << in.start << "+" << in.len << " l=" << l << " r=" << r << " i=" << i;
    }
    EXPECT_THROW(f.view.ers_select(l, r, static_cast<Index>(want.size()) + 1), OutOfRange);
  }
}

TEST(SortedOccView, RejectsMalformedRanges) {
  Fixture f("abababab", 1, 2);
  EXPECT_THROW(f.view.erc_count(0, 0, 0, 1), InvalidArgument);
  EXPECT_THROW(f.view.erc_count(0, 0, 3, 2), InvalidArgument);
  EXPECT_THROW(f.view.erc_count(0, 0, 1, 5), InvalidArgument);
  EXPECT_THROW(f.view.erc_count(-1, 0, 1, 2), InvalidArgument);
  EXPECT_THROW(f.view.locate(5), OutOfRange);
}
