#pragma once

// Brute-force reference implementations. Everything here works on plain
// std::string with 1-based positions and shares no code with the engines.

#include <cstdint>
#include <string>
#include <vector>

namespace dynsa::oracle {

using Pos = std::int64_t;

// Suffix array as 1-based start positions in lexicographic order.
std::vector<Pos> naive_sa(const std::string& text);
// isa[i - 1] is the 1-based rank of the suffix starting at i.
std::vector<Pos> naive_isa(const std::string& text);
std::string naive_bwt(const std::string& text);
// lcp[0] is unused (0); lcp[r - 1] = lcp of suffixes sa[r - 1] and sa[r].
std::vector<Pos> naive_lcp_array(const std::string& text);

// Character-scan LCE. Indexes outside the text give 0.
Pos naive_lcp(const std::string& text, Pos i, Pos j);
Pos naive_lcs(const std::string& text, Pos i, Pos j);
// -1, 0 or 1; a suffix that is a prefix of the other is smaller.
int naive_suffix_cmp(const std::string& text, Pos i, Pos j);

// Number of suffixes j with lcp(i, j) >= k that are smaller than suffix i.
Pos naive_close_rank(const std::string& text, Pos k, Pos i);
std::vector<Pos> naive_close_ranks(const std::string& text, Pos k);

// Start positions of every occurrence of text[s..e], ascending.
std::vector<Pos> naive_occurrences(const std::string& text, Pos s, Pos e);
// Occurrences sorted by the suffix starting at them.
std::vector<Pos> naive_A_w(const std::string& text, Pos s, Pos e);
// Occurrences (s1, e1) with lcs(s - 1, s1 - 1) >= l and lcp(e + 1, e1 + 1) >= r,
// sorted by the suffix starting at them.
std::vector<Pos> naive_A_lr(const std::string& text, Pos s, Pos e, Pos l, Pos r);

// Smallest period by direct O(|w|^2) scan.
Pos naive_period(const std::string& word);

struct Cluster {
  Pos a = 0;
  Pos b = 0;
  Pos p = 0;
  bool operator==(const Cluster&) const = default;
};

// Occurrences of text[s..e] grouped into maximal arithmetic progressions
// with difference per(w); isolated occurrences become (o, o, per(w)).
std::vector<Cluster> naive_por(const std::string& text, Pos s, Pos e);

struct Stairs {
  Pos i = 0;
  Pos j = 0;
  Pos p = 1;
  bool increasing = false;
  int sign = 1;
};

// Applies a stairs update to a 1-based array (element 0 unused).
void naive_stairs(std::vector<std::int64_t>& array, const Stairs& u);

struct Run {
  Pos start = 0;
  Pos end = 0;
  Pos p = 0;
  bool operator==(const Run&) const = default;
};

// Every maximal run with smallest period p and length >= 5p.
std::vector<Run> naive_extreme_runs(const std::string& text);

// Maximal interval containing i on which text has period p.
Run naive_run_with_period(const std::string& text, Pos i, Pos p);

}  // namespace dynsa::oracle
