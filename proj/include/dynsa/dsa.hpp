#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "dynsa/common.hpp"
#include "dynsa/dynstr.hpp"
#include "dynsa/ers.hpp"
#include "dynsa/occindex.hpp"

namespace dynsa {

// Suffix array, BWT and LCP array lookups under substitutions, insertions
// and deletions, with k = ceil(n^(2/3)).
//
// The text is cut into blocks w_x = S[(x-1)t+1 .. xt] of length
// t = floor(k/2). k is chosen when the structure is built and kept while it
// stays within the epoch policy bounds around n^(2/3). The suffixes sharing
// a k-word w are the occurrences of any block inside w extended by fixed
// lengths on both sides, so a rank among them is an extension restricting
// selection on that block.
class DynamicSA {
 public:
  explicit DynamicSA(std::string_view text, Alphabet alphabet = Alphabet());

  Index size() const { return text_.size(); }
  Index k() const { return k_; }
  Index block_length() const { return t_; }
  std::size_t block_count() const { return blocks_.size(); }
  const DynamicString& text() const { return text_; }

  void apply(const EditOp& op);

  Index sa(Index rank) const;
  // S[sa(rank) - 1], wrapping to S[n] for the suffix starting at 1.
  Symbol bwt(Index rank) const;
  // lcp of the suffixes of ranks rank - 1 and rank; 2 <= rank <= n.
  Index lcp_entry(Index rank) const;

 private:
  void rebuild_trees();
  void rebuild_blocks();
  void check_rank(Index rank) const;

  DynamicString text_;
  Index k_ = 1;
  Index t_ = 1;
  std::unique_ptr<KWordsTree> ktree_;
  std::unique_ptr<KWordsTree> ttree_;
  std::vector<SortedOccView> blocks_;
};

// ceil(n^(2/3)) for n >= 1, and 1 for n = 0.
Index two_thirds_power(Index n);

}  // namespace dynsa
