#pragma once

// Shared plumbing for the command-line tool and the acceptance suite: edit
// script parsing, random workloads, differential fuzzing and cost
// measurements.

#include <cstdint>
#include <istream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dynsa/common.hpp"
#include "dynsa/dynstr.hpp"

namespace dynsa::harness {

enum class Mode { Isa, Sa, Bwt, Lcp };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

class ParseError : public Error {
 public:
  ParseError(Index line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  Index line() const { return line_; }

 private:
  Index line_;
};

// One op per line: `sub <i> <c>`, `ins <i> <c>` or `del <i>`. Blank lines
// and lines starting with '#' are skipped.
std::vector<EditOp> parse_script(std::istream& in);
std::string format_script(const std::vector<EditOp>& ops);

// Whitespace-separated 1-based integers, or the single word `all`.
std::vector<Index> parse_queries(const std::string& spec, Index n);

std::string random_text(std::mt19937_64& rng, Index n, const std::string& alphabet);
// Prefix of length n of the Fibonacci word over {a, b}.
std::string fibonacci_word(Index n);

// Draws an edit valid for `text` and applies it to the copy. Substitutions
// always change the symbol.
EditOp random_edit(std::mt19937_64& rng, std::string& text, const std::string& alphabet, bool substitutions_only);

struct FuzzConfig {
  std::uint64_t seed = 1;
  Index n_lo = 16;
  Index n_hi = 128;
  std::string alphabet = "ab";
  int texts = 10;
  int ops = 50;
  Mode mode = Mode::Isa;
  bool check_invariants = true;
  // Corrupts one answer per text; only honoured in fault-injection builds.
  bool inject_fault = false;
};

struct FuzzReport {
  bool ok = true;
  int texts = 0;
  std::int64_t edits = 0;
  std::int64_t answers_checked = 0;
  std::uint64_t lce_calls = 0;
  std::uint64_t range_visits = 0;
  // On failure: what differed, and a reduced script reproducing it.
  std::string mismatch;
  std::string repro_text;
  std::vector<EditOp> repro_ops;
};

FuzzReport run_fuzz(const FuzzConfig& config);

// Replays `ops` on `text` and compares the final answers of `mode` with
// the oracle. Returns an empty string when they agree.
std::string replay_and_compare(const std::string& text, const std::vector<EditOp>& ops, Mode mode, bool inject_fault);

bool fault_injection_available();

struct BenchRow {
  Index n = 0;
  double update_cost = 0;
  double query_cost = 0;
  double lce_per_update = 0;
  double range_per_update = 0;
  double tree_steps_per_update = 0;
  double update_ms = 0;
};

// Average instrumented cost per edit (LCE calls plus range-structure node
// visits) and per query (the same plus order-statistic tree steps) on a
// random text. Mode Isa uses substitutions,
// the other modes use mixed edits and time sa queries.
BenchRow bench_point(Mode mode, Index n, const std::string& alphabet, int ops, int queries, std::uint64_t seed);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace dynsa::harness
