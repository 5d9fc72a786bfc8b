#include <gtest/gtest.h>

#include "dynsa/oracle.hpp"

using namespace dynsa::oracle;

TEST(Oracle, SuffixArrayOfBanana) {
  EXPECT_EQ(naive_sa("banana"), (std::vector<Pos>{6, 4, 2, 1, 5, 3}));
  EXPECT_EQ(naive_isa("banana"), (std::vector<Pos>{4, 3, 6, 2, 5, 1}));
  EXPECT_EQ(naive_bwt("banana"), "nnbaaa");
  EXPECT_EQ(naive_lcp_array("banana"), (std::vector<Pos>{0, 1, 3, 0, 0, 2}));
}

TEST(Oracle, EmptyAndUnary) {
  EXPECT_TRUE(naive_sa("").empty());
  EXPECT_EQ(naive_sa("aaaa"), (std::vector<Pos>{4, 3, 2, 1}));
}

TEST(Oracle, CloseRanks) {
  EXPECT_EQ(naive_close_rank("aaaa", 2, 1), 2);
  EXPECT_EQ(naive_close_ranks("aaaa", 2), (std::vector<Pos>{2, 1, 0, 0}));
  EXPECT_EQ(naive_close_rank("abcd", 1, 3), 0);
}

TEST(Oracle, OccurrenceListsAndPor) {
  const std::string s = "BAABBABBABBABBABBABAB";
  EXPECT_EQ(naive_period("BBABBAB"), 3);
  EXPECT_EQ(naive_por(s, 4, 10), (std::vector<Cluster>{{4, 13, 3}}));
  EXPECT_EQ(naive_por("aaaaaa", 1, 3), (std::vector<Cluster>{{1, 4, 1}}));
  EXPECT_TRUE(naive_A_lr("abcabc", 1, 2, 1, 0).empty());
  EXPECT_EQ(naive_A_w("abcabc", 1, 2), (std::vector<Pos>{4, 1}));
  // (l, r) filter: "ab" at 4 is preceded by 'c' like nothing at 1.
  EXPECT_EQ(naive_A_lr("xabyab", 2, 3, 0, 0).size(), 2u);
}

TEST(Oracle, StairsDefinition) {
  std::vector<std::int64_t> a(11, 0);
  naive_stairs(a, {3, 8, 2, false, 1});
  EXPECT_EQ(a, (std::vector<std::int64_t>{0, 0, 0, 3, 3, 2, 2, 1, 1, 0, 0}));
  std::vector<std::int64_t> b(11, 0);
  naive_stairs(b, {2, 8, 3, true, 1});
  EXPECT_EQ(b, (std::vector<std::int64_t>{0, 0, 1, 1, 1, 2, 2, 2, 3, 0, 0}));
}

TEST(Oracle, Runs) {
  EXPECT_EQ(naive_run_with_period("aaaa", 2, 1), (dynsa::oracle::Run{1, 4, 1}));
  std::string ab;
  for (int i = 0; i < 10; ++i) ab += "ab";
  EXPECT_EQ(naive_run_with_period(ab, 3, 2), (dynsa::oracle::Run{1, 20, 2}));
  auto runs = naive_extreme_runs("baaaaab");
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0], (dynsa::oracle::Run{2, 6, 1}));
}
