#include "dynsa/dsa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dynsa {

Index two_thirds_power(Index n) {
  if (n <= 1) return 1;
  auto k = static_cast<Index>(std::cbrt(static_cast<double>(n) * static_cast<double>(n)));
  // k^3 >= n^2, computed without overflow for the sizes in use.
  auto ok = [n](Index c) { return static_cast<long double>(c) * c * c >= static_cast<long double>(n) * n; };
  while (!ok(k)) ++k;
  while (k > 1 && ok(k - 1)) --k;
  return k;
}

DynamicSA::DynamicSA(std::string_view text, Alphabet alphabet) : text_(text, alphabet) {
  rebuild_trees();
  rebuild_blocks();
}

void DynamicSA::rebuild_trees() {
  k_ = two_thirds_power(size());
  t_ = std::max<Index>(1, k_ / 2);
  ktree_ = std::make_unique<KWordsTree>(text_.view(), k_);
  ttree_ = std::make_unique<KWordsTree>(text_.view(), t_);
}

void DynamicSA::rebuild_blocks() {
  blocks_.clear();
  TextView view = text_.view();
  Index count = size() / t_;
  blocks_.reserve(static_cast<std::size_t>(count));
  for (Index x = 1; x <= count; ++x) {
    // A word with a single occurrence keeps |w| as its period; any period
    // of w gives a valid view, and the exact one costs O(t) probes.
    blocks_.emplace_back(view, por(*ttree_, view, (x - 1) * t_ + 1));
  }
}

void DynamicSA::apply(const EditOp& op) {
  DualView dual = text_.apply(op);
  const EpochPolicy& policy = EpochPolicy::current();
  double target = std::cbrt(static_cast<double>(dual.new_view.size()) * static_cast<double>(dual.new_view.size()));
  bool keep = k_ >= policy.k_low * target && k_ <= policy.k_high * target;
  if (keep) {
    ktree_->update_on_edit(dual, op);
    ttree_->update_on_edit(dual, op);
    text_.commit();
  } else {
    text_.commit();
    rebuild_trees();
  }
  rebuild_blocks();
}

void DynamicSA::check_rank(Index rank) const {
  if (rank < 1 || rank > size()) {
    throw OutOfRange("rank " + std::to_string(rank) + " outside [1.." + std::to_string(size()) + "]");
  }
}

Index DynamicSA::sa(Index rank) const {
  check_rank(rank);
  auto [node, r] = ktree_->findvr(rank);
  Index i0 = ktree_->min_occurrence(node);
  // Unique and padded words need no selection.
  if (ktree_->occurrence_count(node) == 1) return i0;
  // First block starting at or after i0; it ends inside the k-word
  // because 2t <= k.
  Index x = (i0 - 1 + t_ - 1) / t_ + 1;
  Index block_start = (x - 1) * t_ + 1;
  Index block_end = x * t_;
  Index left = block_start - i0;
  Index right = i0 + k_ - 1 - block_end;
  if (x > static_cast<Index>(blocks_.size()) || right < 0) {
    throw Error("no block inside the word at " + std::to_string(i0));
  }
  return blocks_[static_cast<std::size_t>(x - 1)].ers_select(left, right, r) - left;
}

Symbol DynamicSA::bwt(Index rank) const {
  Index p = sa(rank);
  return text_.char_at(p == 1 ? size() : p - 1);
}

Index DynamicSA::lcp_entry(Index rank) const {
  if (rank == 1) throw InvalidArgument("the LCP array has no entry at rank 1");
  check_rank(rank);
  return text_.lcp(sa(rank - 1), sa(rank));
}

}  // namespace dynsa
