#include "dynsa/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace dynsa::oracle {

namespace {

int sym(const std::string& text, Pos i) {
  if (i < 1 || i > static_cast<Pos>(text.size())) return -1;
  return static_cast<unsigned char>(text[i - 1]);
}

}  // namespace

Pos naive_lcp(const std::string& text, Pos i, Pos j) {
  Pos n = static_cast<Pos>(text.size());
  if (i < 1 || j < 1 || i > n || j > n) return 0;
  Pos l = 0;
  while (i + l <= n && j + l <= n && text[i + l - 1] == text[j + l - 1]) ++l;
  return l;
}

Pos naive_lcs(const std::string& text, Pos i, Pos j) {
  Pos n = static_cast<Pos>(text.size());
  if (i < 1 || j < 1 || i > n || j > n) return 0;
  Pos l = 0;
  while (i - l >= 1 && j - l >= 1 && text[i - l - 1] == text[j - l - 1]) ++l;
  return l;
}

int naive_suffix_cmp(const std::string& text, Pos i, Pos j) {
  Pos l = naive_lcp(text, i, j);
  int a = sym(text, i + l);
  int b = sym(text, j + l);
  if (i == j) return 0;
  return a < b ? -1 : (a > b ? 1 : 0);
}

std::vector<Pos> naive_sa(const std::string& text) {
  std::vector<Pos> sa(text.size());
  std::iota(sa.begin(), sa.end(), Pos{1});
  std::sort(sa.begin(), sa.end(), [&](Pos a, Pos b) {
    return text.compare(static_cast<std::size_t>(a - 1), std::string::npos, text, static_cast<std::size_t>(b - 1),
                        std::string::npos) < 0;
  });
  return sa;
}

std::vector<Pos> naive_isa(const std::string& text) {
  auto sa = naive_sa(text);
  std::vector<Pos> isa(sa.size());
  for (std::size_t r = 0; r < sa.size(); ++r) isa[sa[r] - 1] = static_cast<Pos>(r + 1);
  return isa;
}

std::string naive_bwt(const std::string& text) {
  auto sa = naive_sa(text);
  std::string out;
  for (Pos s : sa) out.push_back(s == 1 ? text.back() : text[s - 2]);
  return out;
}

std::vector<Pos> naive_lcp_array(const std::string& text) {
  auto sa = naive_sa(text);
  std::vector<Pos> lcp(sa.size(), 0);
  for (std::size_t r = 1; r < sa.size(); ++r) lcp[r] = naive_lcp(text, sa[r - 1], sa[r]);
  return lcp;
}

Pos naive_close_rank(const std::string& text, Pos k, Pos i) {
  Pos n = static_cast<Pos>(text.size());
  Pos rank = 0;
  for (Pos j = 1; j <= n; ++j) {
    if (j != i && naive_lcp(text, i, j) >= k && naive_suffix_cmp(text, j, i) < 0) ++rank;
  }
  return rank;
}

std::vector<Pos> naive_close_ranks(const std::string& text, Pos k) {
  std::vector<Pos> out;
  for (Pos i = 1; i <= static_cast<Pos>(text.size()); ++i) out.push_back(naive_close_rank(text, k, i));
  return out;
}

std::vector<Pos> naive_occurrences(const std::string& text, Pos s, Pos e) {
  std::vector<Pos> out;
  Pos n = static_cast<Pos>(text.size());
  Pos len = e - s + 1;
  if (len <= 0) return out;
  for (Pos i = 1; i + len - 1 <= n; ++i) {
    if (text.compare(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(len), text,
                     static_cast<std::size_t>(s - 1), static_cast<std::size_t>(len)) == 0) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<Pos> naive_A_w(const std::string& text, Pos s, Pos e) { return naive_A_lr(text, s, e, 0, 0); }

std::vector<Pos> naive_A_lr(const std::string& text, Pos s, Pos e, Pos l, Pos r) {
  std::vector<Pos> out;
  Pos len = e - s + 1;
  for (Pos s1 : naive_occurrences(text, s, e)) {
    Pos e1 = s1 + len - 1;
    if (l > 0 && naive_lcs(text, s - 1, s1 - 1) < l) continue;
    if (r > 0 && naive_lcp(text, e + 1, e1 + 1) < r) continue;
    out.push_back(s1);
  }
  std::sort(out.begin(), out.end(), [&](Pos a, Pos b) { return naive_suffix_cmp(text, a, b) < 0; });
  return out;
}

Pos naive_period(const std::string& word) {
  Pos m = static_cast<Pos>(word.size());
  for (Pos p = 1; p < m; ++p) {
    bool ok = true;
    for (Pos i = 0; i + p < m && ok; ++i) ok = word[i] == word[i + p];
    if (ok) return p;
  }
  return m;
}

std::vector<Cluster> naive_por(const std::string& text, Pos s, Pos e) {
  std::vector<Cluster> out;
  Pos p = naive_period(text.substr(static_cast<std::size_t>(s - 1), static_cast<std::size_t>(e - s + 1)));
  for (Pos o : naive_occurrences(text, s, e)) {
    if (!out.empty() && out.back().b + p == o) {
      out.back().b = o;
    } else {
      out.push_back({o, o, p});
    }
  }
  return out;
}

void naive_stairs(std::vector<std::int64_t>& array, const Stairs& u) {
  Pos steps = (u.j - u.i + 1 + u.p - 1) / u.p;
  for (Pos t = 1; t <= steps; ++t) {
    Pos lo = 0, hi = 0;
    if (u.increasing) {
      lo = u.i + (t - 1) * u.p;
      hi = std::min(u.i + t * u.p - 1, u.j);
    } else {
      lo = std::max(u.j - t * u.p + 1, u.i);
      hi = u.j - (t - 1) * u.p;
    }
    for (Pos x = lo; x <= hi; ++x) array[x] += u.sign * t;
  }
}

Run naive_run_with_period(const std::string& text, Pos i, Pos p) {
  Pos n = static_cast<Pos>(text.size());
  Pos a = i;
  while (a - 1 >= 1 && text[a - 2] == text[a - 2 + p]) --a;
  Pos b = std::min(n, i + p - 1);
  while (b + 1 <= n && text[b] == text[b - p]) ++b;
  return {a, b, p};
}

std::vector<Run> naive_extreme_runs(const std::string& text) {
  Pos n = static_cast<Pos>(text.size());
  std::set<std::pair<Pos, Pos>> seen;
  std::vector<Run> out;
  for (Pos p = 1; 5 * p <= n; ++p) {
    // Maximal stretches with text[i] == text[i + p].
    Pos i = 1;
    while (i + p <= n) {
      if (text[i - 1] != text[i + p - 1]) {
        ++i;
        continue;
      }
      Pos start = i;
      while (i + p <= n && text[i - 1] == text[i + p - 1]) ++i;
      // Positions start..i-1 match their p-successor, so the run spans
      // [start .. i - 1 + p].
      Pos end = i - 1 + p;
      if (end - start + 1 >= 5 * p && seen.insert({start, end}).second) out.push_back({start, end, p});
    }
  }
  return out;
}

}  // namespace dynsa::oracle
