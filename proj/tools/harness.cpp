#include "harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "dynsa/csr.hpp"
#include "dynsa/dsa.hpp"
#include "dynsa/oracle.hpp"

namespace dynsa::harness {

Mode parse_mode(const std::string& name) {
  if (name == "isa") return Mode::Isa;
  if (name == "sa") return Mode::Sa;
  if (name == "bwt") return Mode::Bwt;
  if (name == "lcp") return Mode::Lcp;
  throw InvalidArgument("unknown mode '" + name + "' (expected isa, sa, bwt or lcp)");
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Isa:
      return "isa";
    case Mode::Sa:
      return "sa";
    case Mode::Bwt:
      return "bwt";
    case Mode::Lcp:
      return "lcp";
  }
  return "?";
}

namespace {

Index parse_index(const std::string& word, Index line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(word, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + word + "'");
  }
  if (used != word.size()) throw ParseError(line, "expected an integer, got '" + word + "'");
  return static_cast<Index>(v);
}

Symbol parse_symbol(const std::string& word, Index line) {
  if (word.size() != 1 || static_cast<unsigned char>(word[0]) < 0x21 || static_cast<unsigned char>(word[0]) > 0x7e) {
    throw ParseError(line, "expected a single printable symbol, got '" + word + "'");
  }
  return static_cast<Symbol>(word[0]);
}

}  // namespace

std::vector<EditOp> parse_script(std::istream& in) {
  std::vector<EditOp> ops;
  std::string raw;
  Index line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::istringstream words(raw);
    std::vector<std::string> w;
    for (std::string x; words >> x;) w.push_back(x);
    if (w.empty() || w[0][0] == '#') continue;
    if (w[0] == "sub" || w[0] == "ins") {
      if (w.size() != 3) throw ParseError(line, "'" + w[0] + "' takes a position and a symbol");
      Index i = parse_index(w[1], line);
      Symbol c = parse_symbol(w[2], line);
      ops.push_back(w[0] == "sub" ? EditOp::sub(i, c) : EditOp::ins(i, c));
    } else if (w[0] == "del") {
      if (w.size() != 2) throw ParseError(line, "'del' takes a position");
      ops.push_back(EditOp::del(parse_index(w[1], line)));
    } else {
      throw ParseError(line, "unknown operation '" + w[0] + "'");
    }
  }
  return ops;
}

std::string format_script(const std::vector<EditOp>& ops) {
  std::string out;
  for (const EditOp& op : ops) {
    switch (op.kind) {
      case EditKind::Substitute:
        out += "sub " + std::to_string(op.position) + " " + std::string(1, static_cast<char>(op.symbol));
        break;
      case EditKind::Insert:
        out += "ins " + std::to_string(op.position) + " " + std::string(1, static_cast<char>(op.symbol));
        break;
      case EditKind::Delete:
        out += "del " + std::to_string(op.position);
        break;
    }
    out += '\n';
  }
  return out;
}

std::vector<Index> parse_queries(const std::string& spec, Index n) {
  std::istringstream in(spec);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  std::vector<Index> out;
  if (words.size() == 1 && words[0] == "all") {
    for (Index i = 1; i <= n; ++i) out.push_back(i);
    return out;
  }
  for (std::size_t q = 0; q < words.size(); ++q) {
    if (words[q] == "all") throw ParseError(1, "'all' cannot be combined with other queries");
    out.push_back(parse_index(words[q], 1));
  }
  return out;
}

std::string random_text(std::mt19937_64& rng, Index n, const std::string& alphabet) {
  if (alphabet.empty()) throw InvalidArgument("alphabet is empty");
  std::uniform_int_distribution<std::size_t> d(0, alphabet.size() - 1);
  std::string s;
  for (Index i = 0; i < n; ++i) s.push_back(alphabet[d(rng)]);
  return s;
}

std::string fibonacci_word(Index n) {
  std::string a = "a", b = "ab";
  while (static_cast<Index>(b.size()) < n) {
    std::string next = b + a;
    a = std::move(b);
    b = std::move(next);
  }
  return b.substr(0, static_cast<std::size_t>(n));
}

EditOp random_edit(std::mt19937_64& rng, std::string& text, const std::string& alphabet, bool substitutions_only) {
  auto n = static_cast<Index>(text.size());
  std::uniform_int_distribution<std::size_t> sym(0, alphabet.size() - 1);
  char c = alphabet[sym(rng)];
  int kind = 0;
  if (!substitutions_only) kind = n <= 2 ? 1 : std::uniform_int_distribution<int>(0, 2)(rng);
  if (kind == 0) {
    if (alphabet.size() < 2) throw InvalidArgument("substitutions need at least two symbols");
    Index i = std::uniform_int_distribution<Index>(1, n)(rng);
    while (c == text[i - 1]) c = alphabet[sym(rng)];
    text[i - 1] = c;
    return EditOp::sub(i, static_cast<Symbol>(c));
  }
  if (kind == 1) {
    Index i = std::uniform_int_distribution<Index>(0, n)(rng);
    text.insert(text.begin() + i, c);
    return EditOp::ins(i, static_cast<Symbol>(c));
  }
  Index i = std::uniform_int_distribution<Index>(1, n)(rng);
  text.erase(text.begin() + (i - 1));
  return EditOp::del(i);
}

bool fault_injection_available() {
#ifdef DYNSA_FAULT_INJECTION
  return true;
#else
  return false;
#endif
}

namespace {

// The injected fault shifts one answer once three edits have been applied.
Index maybe_corrupt(Index answer, Index query, int edits, bool inject_fault) {
#ifdef DYNSA_FAULT_INJECTION
  if (inject_fault && edits >= 3 && query == 1) return answer + 1;
#else
  (void)query;
  (void)edits;
  (void)inject_fault;
#endif
  return answer;
}

std::string describe(Mode mode, Index query, Index got, Index want) {
  return mode_name(mode) + "(" + std::to_string(query) + ") = " + std::to_string(got) + ", expected " +
         std::to_string(want);
}

// Compares every answer of the engine with the oracle; returns the first
// difference. `checked` accumulates the number of answers compared.
std::string compare_isa(const DynamicISA& eng, const std::string& text, int edits, bool fault, std::int64_t& checked) {
  auto want = oracle::naive_isa(text);
  for (Index i = 1; i <= eng.size(); ++i) {
    Index got = maybe_corrupt(eng.isa(i), i, edits, fault);
    ++checked;
    if (got != want[i - 1]) return describe(Mode::Isa, i, got, want[i - 1]);
  }
  return {};
}

std::string compare_sa(const DynamicSA& eng, const std::string& text, int edits, bool fault, std::int64_t& checked) {
  auto want = oracle::naive_sa(text);
  auto bwt = oracle::naive_bwt(text);
  auto lcp = oracle::naive_lcp_array(text);
  Index n = eng.size();
  if (n != static_cast<Index>(want.size())) return "length differs";
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  Index prev = 0;
  for (Index i = 1; i <= n; ++i) {
    Index got = maybe_corrupt(eng.sa(i), i, edits, fault);
    ++checked;
    if (got < 1 || got > n || seen[got]) return "sa is not a permutation at rank " + std::to_string(i);
    seen[got] = 1;
    if (prev && eng.text().suffix_cmp(prev, got) >= 0) return "sa is not sorted at rank " + std::to_string(i);
    prev = got;
    if (got != want[i - 1]) return describe(Mode::Sa, i, got, want[i - 1]);
    auto b = static_cast<char>(eng.bwt(i));
    if (b != bwt[i - 1]) return "bwt(" + std::to_string(i) + ") = " + std::string(1, b) + ", expected " + bwt[i - 1];
    if (i >= 2 && eng.lcp_entry(i) != lcp[i - 1]) return describe(Mode::Lcp, i, eng.lcp_entry(i), lcp[i - 1]);
  }
  return {};
}

}  // namespace

std::string replay_and_compare(const std::string& text, const std::vector<EditOp>& ops, Mode mode, bool inject_fault) {
  std::string plain = text;
  std::int64_t checked = 0;
  auto apply_plain = [&](const EditOp& op) {
    switch (op.kind) {
      case EditKind::Substitute:
        plain[op.position - 1] = static_cast<char>(op.symbol);
        break;
      case EditKind::Insert:
        plain.insert(plain.begin() + op.position, static_cast<char>(op.symbol));
        break;
      case EditKind::Delete:
        plain.erase(plain.begin() + (op.position - 1));
        break;
    }
  };
  if (mode == Mode::Isa) {
    DynamicISA eng(text, CsrOptions{false, true});
    for (const EditOp& op : ops) {
      eng.apply(op);
      apply_plain(op);
    }
    return compare_isa(eng, plain, static_cast<int>(ops.size()), inject_fault, checked);
  }
  DynamicSA eng(text);
  for (const EditOp& op : ops) {
    eng.apply(op);
    apply_plain(op);
  }
  return compare_sa(eng, plain, static_cast<int>(ops.size()), inject_fault, checked);
}

namespace {

// Greedily drops edits while the final state still mismatches.
std::vector<EditOp> minimize(const std::string& text, std::vector<EditOp> ops, Mode mode, bool fault) {
  for (std::size_t q = 0; q + 1 < ops.size();) {
    std::vector<EditOp> trial = ops;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(q));
    bool still = false;
    try {
      still = !replay_and_compare(text, trial, mode, fault).empty();
    } catch (const Error&) {
      still = false;
    }
    if (still) {
      ops = std::move(trial);
    } else {
      ++q;
    }
  }
  return ops;
}

}  // namespace

FuzzReport run_fuzz(const FuzzConfig& config) {
  if (config.n_lo < 1 || config.n_hi < config.n_lo) throw InvalidArgument("bad text length range");
  if (config.inject_fault && !fault_injection_available()) {
    throw Unsupported("this build has no fault injection; configure with -DDYNSA_FAULT_INJECTION=ON");
  }
  FuzzReport report;
  std::mt19937_64 rng(config.seed);
  bool subs_only = config.mode == Mode::Isa;
  OpCounters before = op_counters();
  for (int round = 0; round < config.texts; ++round) {
    Index n = std::uniform_int_distribution<Index>(config.n_lo, config.n_hi)(rng);
    std::string start = random_text(rng, n, config.alphabet);
    std::string text = start;
    std::vector<EditOp> ops;
    std::string diff;
    if (subs_only) {
      DynamicISA eng(text, CsrOptions{false, config.check_invariants});
      diff = compare_isa(eng, text, 0, config.inject_fault, report.answers_checked);
      for (int step = 0; step < config.ops && diff.empty(); ++step) {
        EditOp op = random_edit(rng, text, config.alphabet, true);
        ops.push_back(op);
        try {
          eng.apply(op);
          diff = compare_isa(eng, text, step + 1, config.inject_fault, report.answers_checked);
        } catch (const Error& e) {
          diff = std::string("engine error: ") + e.what();
        }
        ++report.edits;
      }
    } else {
      DynamicSA eng(text);
      diff = compare_sa(eng, text, 0, config.inject_fault, report.answers_checked);
      for (int step = 0; step < config.ops && diff.empty(); ++step) {
        EditOp op = random_edit(rng, text, config.alphabet, false);
        ops.push_back(op);
        try {
          eng.apply(op);
          diff = compare_sa(eng, text, step + 1, config.inject_fault, report.answers_checked);
        } catch (const Error& e) {
          diff = std::string("engine error: ") + e.what();
        }
        ++report.edits;
      }
    }
    ++report.texts;
    if (!diff.empty()) {
      report.ok = false;
      report.mismatch = diff;
      report.repro_text = start;
      report.repro_ops = minimize(start, ops, config.mode, config.inject_fault);
      break;
    }
  }
  report.lce_calls = op_counters().lce_calls - before.lce_calls;
  report.range_visits = op_counters().range_visits - before.range_visits;
  return report;
}

BenchRow bench_point(Mode mode, Index n, const std::string& alphabet, int ops, int queries, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::string text = random_text(rng, n, alphabet);
  BenchRow row;
  row.n = n;
  // Queries do almost no LCE or range work on random texts, so their cost
  // also counts order-statistic tree steps.
  auto qcost = [] { return op_counters().lce_calls + op_counters().range_visits + op_counters().tree_steps; };
  std::uint64_t lce = 0, range = 0, steps = 0, total = 0, qtotal = 0;
  double ms = 0;

  auto measure = [&](auto& eng, bool subs_only, auto&& query) {
    for (int step = 0; step < ops; ++step) {
      EditOp op = random_edit(rng, text, alphabet, subs_only);
      OpCounters before = op_counters();
      auto t0 = std::chrono::steady_clock::now();
      eng.apply(op);
      ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      lce += op_counters().lce_calls - before.lce_calls;
      range += op_counters().range_visits - before.range_visits;
      steps += op_counters().tree_steps - before.tree_steps;
      total += op_counters().lce_calls + op_counters().range_visits - before.lce_calls - before.range_visits;
    }
    for (int q = 0; q < queries; ++q) {
      Index i = std::uniform_int_distribution<Index>(1, eng.size())(rng);
      std::uint64_t c0 = qcost();
      query(i);
      qtotal += qcost() - c0;
    }
  };

  if (mode == Mode::Isa) {
    DynamicISA eng(text);
    measure(eng, true, [&](Index i) { (void)eng.isa(i); });
  } else {
    DynamicSA eng(text);
    measure(eng, false, [&](Index i) { (void)eng.sa(i); });
  }
  double k = ops > 0 ? ops : 1;
  row.update_cost = static_cast<double>(total) / k;
  row.lce_per_update = static_cast<double>(lce) / k;
  row.range_per_update = static_cast<double>(range) / k;
  row.tree_steps_per_update = static_cast<double>(steps) / k;
  row.update_ms = ms / k;
  row.query_cost = queries > 0 ? static_cast<double>(qtotal) / queries : 0;
  return row;
}

double loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw InvalidArgument("a slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : points) {
    double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double m = static_cast<double>(points.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace dynsa::harness
