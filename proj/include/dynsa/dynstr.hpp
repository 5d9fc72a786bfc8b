#pragma once

#include <bitset>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dynsa/common.hpp"

namespace dynsa {

// Ordered symbol set. Symbols are bytes ordered by their unsigned value.
class Alphabet {
 public:
  // Every byte value is allowed.
  Alphabet() { set_.set(); }

  static Alphabet of(std::string_view symbols);

  bool contains(Symbol c) const { return set_.test(c); }
  std::string symbols() const;

 private:
  std::bitset<256> set_;
};

enum class EditKind { Substitute, Insert, Delete };

struct EditOp {
  EditKind kind = EditKind::Substitute;
  // 1-based. For Insert, 0..n and the symbol goes after this position.
  Index position = 0;
  Symbol symbol = 0;

  static EditOp sub(Index i, Symbol c) { return {EditKind::Substitute, i, c}; }
  static EditOp ins(Index i, Symbol c) { return {EditKind::Insert, i, c}; }
  static EditOp del(Index i) { return {EditKind::Delete, i, 0}; }
};

std::string to_string(const EditOp& op);

class DynamicString;

// Read handle on one version of a DynamicString.
//
// Positions outside [1..n] behave as a sentinel smaller than every symbol:
// comparisons treat a suffix that ends as smaller, LCE never runs past n.
class TextView {
 public:
  TextView() = default;

  Index size() const;
  Symbol char_at(Index i) const;
  // Symbol at i, or -1 when i is outside [1..n].
  int at(Index i) const;

  // Longest common prefix of the suffixes at i and j. 1 <= i, j <= n.
  Index lcp(Index i, Index j) const;
  // Longest common suffix of the prefixes ending at i and j. 0 <= i, j <= n.
  Index lcs(Index i, Index j) const;
  // Negative, zero or positive as suffix i is smaller, equal or larger.
  int suffix_cmp(Index i, Index j) const;

  // Lenient forms used by the engines: indexes past either end give 0.
  Index lcp_or0(Index i, Index j) const;
  Index lcs_or0(Index i, Index j) const;

  // Compares the length-len words starting at i and j with the sentinel rule.
  int word_cmp(Index i, Index j, Index len) const;

  std::string str() const;
  std::string substr(Index i, Index len) const;

 private:
  friend class DynamicString;
  TextView(const DynamicString* owner, std::int32_t root) : owner_(owner), root_(root) {}

  std::uint64_t prefix_hash(Index i) const;
  std::uint64_t range_hash(Index from, Index len, std::uint64_t before) const;
  Index lcp_unchecked(Index i, Index j) const;
  Index lcs_unchecked(Index i, Index j) const;

  const DynamicString* owner_ = nullptr;
  std::int32_t root_ = 0;
};

// Both versions of the text around one pending edit.
struct DualView {
  TextView old_view;
  TextView new_view;
};

// Text under edits, stored as a persistent treap whose nodes carry
// polynomial fingerprints modulo 2^61 - 1. The fingerprint base is drawn
// once per process, so a false LCE answer needs a polynomial collision;
// with n <= 2^20 the probability per comparison is below 2^-40. Every LCE
// answer is also checked at the mismatch boundary.
class DynamicString {
 public:
  explicit DynamicString(std::string_view text = {}, Alphabet alphabet = Alphabet());

  Index size() const { return size_of(root_); }
  std::uint64_t version() const { return version_; }
  const Alphabet& alphabet() const { return alphabet_; }

  // Reads on the newest version.
  TextView view() const { return TextView(this, root_); }
  Symbol char_at(Index i) const { return view().char_at(i); }
  Index lcp(Index i, Index j) const { return view().lcp(i, j); }
  Index lcs(Index i, Index j) const { return view().lcs(i, j); }
  int suffix_cmp(Index i, Index j) const { return view().suffix_cmp(i, j); }
  std::string str() const { return view().str(); }

  // Applies the edit and keeps the previous version readable until commit().
  // Only one edit may be pending at a time.
  DualView apply(const EditOp& op);
  void commit();
  bool pending() const { return pending_; }

  // Validates an edit against the current text without applying it.
  void check(const EditOp& op) const;

 private:
  friend class TextView;

  struct Node {
    std::int32_t left = 0;
    std::int32_t right = 0;
    std::uint32_t priority = 0;
    std::int32_t size = 0;
    std::uint64_t hash = 0;
    Symbol symbol = 0;
  };

  Index size_of(std::int32_t t) const { return nodes_[t].size; }
  std::int32_t make_leaf(Symbol c);
  std::int32_t clone(std::int32_t t);
  void pull(std::int32_t t);
  std::int32_t build(std::string_view text);
  std::int32_t assign(std::int32_t t, Index pos, Symbol c);
  void split(std::int32_t t, Index k, std::int32_t& a, std::int32_t& b);
  std::int32_t merge(std::int32_t a, std::int32_t b);
  void ensure_powers(Index n);
  void compact();
  std::int32_t copy_into(std::vector<Node>& out, std::int32_t t) const;

  std::vector<Node> nodes_;
  std::vector<std::uint64_t> powers_;
  std::int32_t root_ = 0;
  std::int32_t old_root_ = 0;
  bool pending_ = false;
  std::uint64_t version_ = 0;
  std::uint64_t rng_state_;
  Alphabet alphabet_;
};

}  // namespace dynsa
