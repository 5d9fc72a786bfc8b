#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "dynsa/dynstr.hpp"
#include "dynsa/occindex.hpp"
#include "dynsa/oracle.hpp"

using namespace dynsa;

namespace {

std::string random_text(std::mt19937_64& rng, std::size_t n, int sigma) {
  std::string s;
  std::uniform_int_distribution<int> d(0, sigma - 1);
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + d(rng)));
  return s;
}

// Periodic text with sparse noise, which produces long clusters.
std::string periodic_text(std::mt19937_64& rng, std::size_t n, std::size_t period, double noise) {
  std::string unit = random_text(rng, period, 2);
  std::string s;
  std::bernoulli_distribution flip(noise);
  for (std::size_t i = 0; i < n; ++i) s.push_back(flip(rng) ? 'c' : unit[i % period]);
  return s;
}

// Expected dump: words (with padding) grouped and sorted by suffix order
// of their first occurrence.
std::vector<std::pair<std::string, std::vector<Index>>> naive_dump(const std::string& text, Index k) {
  auto n = static_cast<Index>(text.size());
  std::map<std::string, std::vector<Index>> groups;
  for (Index i = 1; i <= n; ++i) groups[text.substr(i - 1, k)].push_back(i);
  std::vector<std::pair<std::string, std::vector<Index>>> out(groups.begin(), groups.end());
  // std::string order already treats a shorter prefix as smaller.
  return out;
}

// Substitutions always change the symbol; DynamicString rejects no-ops.
EditOp random_edit(std::mt19937_64& rng, const DynamicString& s, int sigma) {
  Index n = s.size();
  std::uniform_int_distribution<int> kind(sigma == 1 ? 1 : 0, 2);
  std::uniform_int_distribution<int> sym(0, sigma - 1);
  int k = n <= 2 ? 1 : kind(rng);
  auto c = static_cast<Symbol>('a' + sym(rng));
  if (k == 0) {
    Index i = std::uniform_int_distribution<Index>(1, n)(rng);
    if (s.char_at(i) == c) c = static_cast<Symbol>('a' + (c - 'a' + 1) % sigma);
    return EditOp::sub(i, c);
  }
  if (k == 1) return EditOp::ins(std::uniform_int_distribution<Index>(0, n)(rng), c);
  return EditOp::del(std::uniform_int_distribution<Index>(1, n)(rng));
}

std::vector<oracle::Cluster> to_oracle(const POR& p) {
  std::vector<oracle::Cluster> out;
  for (auto& c : p.clusters) out.push_back({c.a, c.b, c.p});
  return out;
}

}  // namespace

TEST(PositionLedger, TracksShifts) {
  PositionLedger led(5);
  auto t3 = led.token_at(3);
  EXPECT_EQ(led.position_of(t3), 3);
  led.insert_at(1);
  EXPECT_EQ(led.position_of(t3), 4);
  led.erase_at(2);
  EXPECT_EQ(led.position_of(t3), 3);
  EXPECT_EQ(led.size(), 5);
  EXPECT_THROW(led.token_at(6), OutOfRange);
  EXPECT_THROW(led.erase_at(0), OutOfRange);
}

TEST(PositionLedger, RandomAgainstVector) {
  std::mt19937_64 rng(5);
  PositionLedger led(50);
  std::vector<PositionLedger::Token> ref;
  for (Index i = 1; i <= 50; ++i) ref.push_back(led.token_at(i));
  for (int step = 0; step < 3000; ++step) {
    auto n = static_cast<Index>(ref.size());
    if (n == 0 || rng() % 2) {
      Index pos = std::uniform_int_distribution<Index>(1, n + 1)(rng);
      ref.insert(ref.begin() + (pos - 1), led.insert_at(pos));
    } else {
      Index pos = std::uniform_int_distribution<Index>(1, n)(rng);
      led.erase_at(pos);
      ref.erase(ref.begin() + (pos - 1));
    }
    if (step % 97 == 0) {
      for (Index i = 1; i <= static_cast<Index>(ref.size()); ++i) {
        ASSERT_EQ(led.token_at(i), ref[i - 1]);
        ASSERT_EQ(led.position_of(ref[i - 1]), i);
      }
    }
  }
}

TEST(KWordsTree, RepeatedLetterExample) {
  DynamicString s("aaaa");
  KWordsTree tree(s.view(), 2);
  // "a$" < "aa": three positions share "aa", position 4 is padded.
  EXPECT_EQ(tree.node_count(), 2u);
  auto [v4, left4] = tree.find_node(4);
  EXPECT_EQ(left4, 0);
  EXPECT_EQ(tree.occurrence_count(v4), 1);
  auto [v1, left1] = tree.find_node(1);
  EXPECT_EQ(left1, 1);
  EXPECT_EQ(tree.occurrences(v1), (std::vector<Index>{1, 2, 3}));
}

TEST(KWordsTree, BananaFindNodeAndFindvr) {
  std::string text = "banana";
  DynamicString s(text);
  KWordsTree tree(s.view(), 2);
  auto sa = oracle::naive_sa(text);
  auto isa = oracle::naive_isa(text);
  auto close = oracle::naive_close_ranks(text, 2);
  for (Index i = 1; i <= 6; ++i) {
    auto [v, left] = tree.find_node(i);
    EXPECT_EQ(left + close[i - 1] + 1, isa[i - 1]) << "i=" << i;
    (void)v;
  }
  for (Index r = 1; r <= 6; ++r) {
    auto [v, rr] = tree.findvr(r);
    Index i = sa[r - 1];
    EXPECT_EQ(tree.node_of(i), v);
    EXPECT_EQ(close[i - 1] + 1, rr);
  }
  EXPECT_THROW(tree.findvr(0), OutOfRange);
  EXPECT_THROW(tree.findvr(7), OutOfRange);
}

TEST(KWordsTree, MatchesNaiveOnRandomTexts) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    auto n = static_cast<std::size_t>(1 + rng() % 120);
    int sigma = 1 + static_cast<int>(rng() % 3);
    std::string text = random_text(rng, n, sigma);
    Index k = 1 + static_cast<Index>(rng() % 6);
    DynamicString s(text);
    KWordsTree tree(s.view(), k);
    ASSERT_EQ(tree.dump(s.view()), naive_dump(text, k)) << text << " k=" << k;
    auto isa = oracle::naive_isa(text);
    auto close = oracle::naive_close_ranks(text, k);
    for (Index i = 1; i <= static_cast<Index>(n); ++i) {
      ASSERT_EQ(tree.find_node(i).second + close[i - 1] + 1, isa[i - 1]);
    }
  }
}

TEST(KWordsTree, EditsMatchFreshConstruction) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 12; ++rep) {
    int sigma = 1 + static_cast<int>(rng() % 3);
    std::string text = random_text(rng, 30 + rng() % 40, sigma);
    Index k = 1 + static_cast<Index>(rng() % 5);
    DynamicString s(text);
    KWordsTree tree(s.view(), k);
    for (int step = 0; step < 150; ++step) {
      EditOp op = random_edit(rng, s, sigma);
      auto dual = s.apply(op);
      tree.update_on_edit(dual, op);
      s.commit();
      ASSERT_EQ(tree.size(), s.size());
      ASSERT_EQ(tree.dump(s.view()), naive_dump(s.str(), k)) << to_string(op) << " on " << s.str();
    }
  }
}

TEST(KWordsTree, LongWordsUnderEditsMatchFreshConstruction) {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    int sigma = 1 + static_cast<int>(rng() % 2);
    std::string text = random_text(rng, 80 + rng() % 80, sigma);
    Index k = 8 + static_cast<Index>(rng() % 24);
    DynamicString s(text);
    KWordsTree tree(s.view(), k);
    for (int step = 0; step < 100; ++step) {
      EditOp op = random_edit(rng, s, sigma);
      auto dual = s.apply(op);
      tree.update_on_edit(dual, op);
      s.commit();
      ASSERT_EQ(tree.dump(s.view()), naive_dump(s.str(), k)) << to_string(op) << " on " << s.str();
    }
  }
}

// Each rewritten word is placed by a search starting at its old node, so
// the LCE calls per word stay bounded instead of growing with the depth.
TEST(KWordsTree, EditCostPerWordIsSmall) {
  std::mt19937_64 rng(14);
  DynamicString s(random_text(rng, 6000, 2));
  const Index k = 300;
  KWordsTree tree(s.view(), k);
  std::uint64_t before = op_counters().lce_calls;
  const int edits = 20;
  for (int step = 0; step < edits; ++step) {
    Index x = k + static_cast<Index>(rng() % 5000);
    EditOp op = EditOp::sub(x, s.view().at(x) == 'a' ? 'b' : 'a');
    auto dual = s.apply(op);
    tree.update_on_edit(dual, op);
    s.commit();
  }
  double per_word = static_cast<double>(op_counters().lce_calls - before) / (edits * k);
  EXPECT_LT(per_word, 8.0);
}

TEST(KWordsTree, RejectsUnsyncedEdit) {
  DynamicString s("abcd");
  KWordsTree tree(s.view(), 2);
  DynamicString other("abcdef");
  auto dual = other.apply(EditOp::sub(1, 'x'));
  EXPECT_THROW(tree.update_on_edit(dual, EditOp::sub(1, 'x')), InvalidArgument);
  EXPECT_THROW(KWordsTree(s.view(), 0), InvalidArgument);
}

TEST(Periodicity, RunExamples) {
  std::string text;
  for (int i = 0; i < 10; ++i) text += "ab";
  DynamicString s(text);
  dynsa::Run r = run_with_period(s.view(), 3, 2);
  EXPECT_EQ(r, (dynsa::Run{1, 20, 2}));
  EXPECT_TRUE(is_extremely_periodic(r));
  DynamicString a("aaaa");
  EXPECT_FALSE(is_extremely_periodic(run_with_period(a.view(), 1, 1)));
  EXPECT_THROW(run_with_period(a.view(), 4, 2), OutOfRange);
}

TEST(Periodicity, RunsAndPeriodsMatchNaive) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 60; ++rep) {
    std::string text = rep % 2 ? periodic_text(rng, 80 + rng() % 100, 1 + rng() % 6, 0.03)
                               : random_text(rng, 1 + rng() % 150, 1 + rng() % 3);
    DynamicString s(text);
    auto n = static_cast<Index>(text.size());
    for (int probe = 0; probe < 30; ++probe) {
      Index i = std::uniform_int_distribution<Index>(1, n)(rng);
      Index p = std::uniform_int_distribution<Index>(1, n - i + 1)(rng);
      auto expect = oracle::naive_run_with_period(text, i, p);
      dynsa::Run got = run_with_period(s.view(), i, p);
      ASSERT_EQ(got.start, expect.start);
      ASSERT_EQ(got.end, expect.end);
      Index len = std::uniform_int_distribution<Index>(1, n - i + 1)(rng);
      ASSERT_EQ(smallest_period(s.view(), i, len), oracle::naive_period(text.substr(i - 1, len)));
    }
    auto expect = oracle::naive_extreme_runs(text);
    std::sort(expect.begin(), expect.end(), [](auto& x, auto& y) {
      return std::make_pair(x.start, x.end) < std::make_pair(y.start, y.end);
    });
    auto got = extreme_runs(s.view());
    ASSERT_EQ(got.size(), expect.size()) << text;
    for (std::size_t q = 0; q < got.size(); ++q) {
      EXPECT_EQ(got[q].start, expect[q].start);
      EXPECT_EQ(got[q].end, expect[q].end);
      EXPECT_EQ(got[q].p, expect[q].p);
    }
  }
}

// Extremely periodic runs with the same period overlap in fewer than p
// positions, so a position lies in at most a logarithmic number of them.
TEST(Periodicity, ExtremeRunOverlapBound) {
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 20; ++rep) {
    std::string text = periodic_text(rng, 400, 1 + rng() % 4, 0.02);
    DynamicString s(text);
    auto runs = extreme_runs(s.view());
    for (std::size_t a = 0; a < runs.size(); ++a) {
      for (std::size_t b = a + 1; b < runs.size(); ++b) {
        if (runs[a].p != runs[b].p) continue;
        Index overlap = std::min(runs[a].end, runs[b].end) - std::max(runs[a].start, runs[b].start) + 1;
        EXPECT_LT(overlap, runs[a].p);
      }
    }
  }
}

TEST(POR, WorkedExample) {
  DynamicString s("BAABBABBABBABBABBABAB");
  KWordsTree tree(s.view(), 7);
  POR p = por(tree, s.view(), 4);
  EXPECT_EQ(p.p, 3);
  ASSERT_EQ(p.clusters.size(), 1u);
  EXPECT_EQ(p.clusters[0], (Cluster{4, 13, 3}));
  EXPECT_EQ(p.occurrence_count(), 4);
}

TEST(POR, SingleOccurrencePeriodIsLazy) {
  DynamicString s("abaabcab");
  KWordsTree tree(s.view(), 4);
  POR lazy = por(tree, s.view(), 1);
  EXPECT_EQ(lazy.p, 4);
  POR exact = por(tree, s.view(), 1, true);
  EXPECT_EQ(exact.p, 3);
  EXPECT_EQ(exact.clusters.size(), 1u);
}

TEST(POR, MatchesNaiveUnderEdits) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    std::string text = periodic_text(rng, 120, 1 + rng() % 5, 0.05);
    Index k = 2 + static_cast<Index>(rng() % 12);
    DynamicString s(text);
    KWordsTree tree(s.view(), k);
    for (int step = 0; step < 60; ++step) {
      EditOp op = random_edit(rng, s, 3);
      auto dual = s.apply(op);
      tree.update_on_edit(dual, op);
      s.commit();
      std::string cur = s.str();
      auto n = s.size();
      for (Index i = 1; i + k - 1 <= n; i += 1 + static_cast<Index>(rng() % 4)) {
        POR p = por(tree, s.view(), i, true);
        ASSERT_EQ(to_oracle(p), oracle::naive_por(cur, i, i + k - 1)) << cur << " i=" << i << " k=" << k;
        ASSERT_EQ(p.p, oracle::naive_period(cur.substr(i - 1, k)));
      }
    }
  }
}

// Two periods p, q of a word with p + q <= |w| imply period gcd(p, q).
TEST(POR, CloseOccurrencesShareThePeriod) {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 300; ++rep) {
    std::string text = periodic_text(rng, 60, 1 + rng() % 6, 0.0);
    DynamicString s(text);
    Index len = 10 + static_cast<Index>(rng() % 40);
    Index p = smallest_period(s.view(), 1, len);
    for (Index q = p + 1; p + q <= len; ++q) {
      if (s.view().lcp(1, 1 + q) >= len - q) {
        EXPECT_EQ(q % p, 0) << text << " q=" << q;
      }
    }
  }
}

TEST(ClusterComparisons, ProgressionMatchesDirectLce) {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int rep = 0; rep < 60; ++rep) {
    std::string text = periodic_text(rng, 150, 1 + rng() % 4, 0.04);
    DynamicString s(text);
    auto n = s.size();
    Index k = 4 + static_cast<Index>(rng() % 10);
    KWordsTree tree(s.view(), k);
    for (Index i = 1; i + k - 1 <= n; i += 3) {
      POR p = por(tree, s.view(), i, true);
      for (const Cluster& c : p.clusters) {
        ClusterProgression prog = cluster_lce_progression(s.view(), i, i + k - 1, c);
        for (Index t = 0; t < c.size(); ++t) {
          Index st = c.at(t);
          if (st == i || prog.is_aligned(t)) continue;
          ASSERT_EQ(prog.l_at(t, c.p), oracle::naive_lcs(text, i - 1, st - 1));
          ASSERT_EQ(prog.r_at(t, c.p), oracle::naive_lcp(text, i + k, st + k));
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(ClusterComparisons, LexIntervalsMatchSuffixOrder) {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 60; ++rep) {
    std::string text = periodic_text(rng, 150, 1 + rng() % 4, 0.04);
    DynamicString s(text);
    auto n = s.size();
    Index k = 4 + static_cast<Index>(rng() % 10);
    KWordsTree tree(s.view(), k);
    for (Index i = 1; i + k - 1 <= n; i += 2) {
      POR p = por(tree, s.view(), i, true);
      for (const Cluster& c : p.clusters) {
        LexIntervals li = lex_intervals(s.view(), c, i, k);
        for (Index t = 0; t < c.size(); ++t) {
          Index st = c.at(t);
          int cmp = st == i ? 0 : oracle::naive_suffix_cmp(text, st, i);
          ASSERT_EQ(li.less.contains(t), cmp < 0) << text << " i=" << i << " t=" << t;
          ASSERT_EQ(li.greater.contains(t), cmp > 0);
        }
      }
    }
  }
}
