#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string_view>
#include <tuple>
#include <vector>

#include "dynsa/common.hpp"
#include "dynsa/dynstr.hpp"
#include "dynsa/occindex.hpp"
#include "dynsa/rangetree.hpp"
#include "dynsa/stairs.hpp"

namespace dynsa {

// Logical rank array R[1..n] kept as an interval store plus one stairs
// store per step width. A stairs store St_p only receives updates that lie
// inside an extremely periodic run of period p, and that run is recorded
// in a registry (ActInt). Two invariants hold between substitutions:
//   A. every registered (start, end, p) is an extremely periodic run of the
//      current text;
//   B. St_p[y] = 0 whenever no registered run of period p contains y.
// A read therefore only consults the stores of registered runs covering i.
class RankStore {
 public:
  struct Stats {
    std::uint64_t intervals = 0;
    std::uint64_t expanded_stairs = 0;
    std::uint64_t routed_stairs = 0;
    std::uint64_t registrations = 0;
    std::uint64_t zeroed = 0;
  };

  explicit RankStore(Index n = 0);

  Index size() const { return n_; }

  void add_interval(Index i, Index j, std::int64_t amount);
  // `text` is the version whose runs contain the update. Updates with at
  // most five steps are expanded into interval updates; longer ones must
  // lie inside a period-p run, otherwise Error is thrown.
  void add_stairs(TextView text, const StairsUpdate& u);
  void apply(TextView text, const BatchUpdate& u, int sign = 1);

  std::int64_t read(Index i) const;
  void assign(Index i, std::int64_t value);

  // Restores invariants A and B after the symbol at x changed. `text` is
  // the new version.
  void after_substitution(TextView text, Index x);

  // Full scan; throws Error naming the first violation.
  void check_invariants(TextView text) const;

  std::vector<Run> registered_runs() const;
  std::size_t stairs_store_count() const { return per_p_.size(); }
  const Stats& stats() const { return stats_; }

 private:
  bool register_run(const Run& r);
  void unregister_run(Index p, Index start, Index end);
  bool covered(Index y, Index p) const;
  FixedWidthStairsStore& store(Index p);

  Index n_;
  IntervalStore base_;
  std::map<Index, std::unique_ptr<FixedWidthStairsStore>> per_p_;
  RangeTree act_int_{2};
  // (p, start, end) -> handle in act_int_; keeps registrations unique.
  std::map<std::tuple<Index, Index, Index>, RangeTree::Handle> keys_;
  Stats stats_;
};

struct CsrOptions {
  // Process every occurrence of a cluster on its own instead of through
  // the stairs reductions. Used as a reference path in tests.
  bool expand_clusters = false;
  // Run RankStore::check_invariants after every substitution.
  bool check_invariants = false;
};

// Inverted suffix array under substitutions, with k about sqrt(n). The rank
// of suffix i is the number of suffixes whose k-word is smaller plus its
// close rank r(i) among suffixes sharing the k-word.
class DynamicISA {
 public:
  explicit DynamicISA(std::string_view text, CsrOptions options = {}, Alphabet alphabet = Alphabet());

  Index size() const { return text_.size(); }
  Index k() const { return k_; }
  const DynamicString& text() const { return text_; }
  const RankStore& ranks() const { return ranks_; }

  void substitute(Index x, Symbol c);
  // Only substitutions are supported; insertions and deletions throw
  // Unsupported.
  void apply(const EditOp& op);

  Index close_rank(Index i) const;
  Index isa(Index i) const;

  void check_invariants() const;

 private:
  void rebuild();
  void check_position(Index i) const;

  // Shift updates for the dynamic suffixes anchored at s (word of length
  // h_), applied with the given sign on the version `view`.
  void shift_half(TextView view, const KWordsTree& tree, Index s, Index delta_max, int sign);
  void evaluate_half(TextView view, Index s, Index delta_max);
  void overtake_updates(const DualView& dual, Index x);

  CsrOptions options_;
  DynamicString text_;
  Index k_ = 1;
  Index h_ = 1;
  std::unique_ptr<KWordsTree> ktree_;
  std::unique_ptr<KWordsTree> htree_;
  RankStore ranks_;
};

}  // namespace dynsa
