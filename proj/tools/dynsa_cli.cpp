#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dynsa/csr.hpp"
#include "dynsa/dsa.hpp"
#include "harness.hpp"

using namespace dynsa;
using namespace dynsa::harness;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitUnsupported = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// A single trailing line break is not part of the text.
std::string strip_final_newline(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

int cmd_query(const std::string& text_path, const std::string& mode_str, const std::string& script_path,
              const std::string& query_spec) {
  Mode mode = parse_mode(mode_str);
  std::string text = strip_final_newline(read_file(text_path));
  std::vector<EditOp> ops;
  if (!script_path.empty()) {
    std::ifstream in(script_path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read " + script_path);
    ops = parse_script(in);
  }
  if (mode == Mode::Isa) {
    for (std::size_t q = 0; q < ops.size(); ++q) {
      if (ops[q].kind != EditKind::Substitute) {
        std::cerr << "error: edit " << q + 1 << " (" << to_string(ops[q])
                  << "): the isa mode only supports substitutions\n";
        return kExitUnsupported;
      }
    }
  }

  std::string spec = query_spec;
  if (std::ifstream probe(spec); probe.good() && spec != "all") spec = read_file(spec);

  auto run = [&](auto& engine, auto&& answer) {
    for (std::size_t q = 0; q < ops.size(); ++q) {
      try {
        engine.apply(ops[q]);
      } catch (const Error& e) {
        throw ParseError(static_cast<Index>(q + 1), std::string("cannot apply edit: ") + e.what());
      }
    }
    std::string out;
    for (Index i : parse_queries(spec, engine.size())) out += std::to_string(i) + "\t" + answer(i) + "\n";
    std::cout << out;
  };

  if (mode == Mode::Isa) {
    DynamicISA engine(text);
    run(engine, [&](Index i) { return std::to_string(engine.isa(i)); });
  } else {
    DynamicSA engine(text);
    run(engine, [&](Index i) -> std::string {
      switch (mode) {
        case Mode::Sa:
          return std::to_string(engine.sa(i));
        case Mode::Bwt:
          return std::string(1, static_cast<char>(engine.bwt(i)));
        default:
          return std::to_string(engine.lcp_entry(i));
      }
    });
  }
  return 0;
}

std::pair<Index, Index> parse_range(const std::string& s) {
  auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      Index v = std::stoll(s);
      return {v, v};
    }
    return {std::stoll(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw InvalidArgument("expected N or LO:HI, got '" + s + "'");
  }
}

int cmd_fuzz(FuzzConfig config, const std::string& n_range) {
  std::tie(config.n_lo, config.n_hi) = parse_range(n_range);
  FuzzReport r = run_fuzz(config);
  if (!r.ok) {
    std::cout << "FAIL " << r.mismatch << "\n";
    std::cout << "# reproduction: text on the first line, then the edit script\n";
    std::cout << r.repro_text << "\n" << format_script(r.repro_ops);
    return kExitMismatch;
  }
  std::cout << "PASS mode=" << mode_name(config.mode) << " texts=" << r.texts << " edits=" << r.edits
            << " answers=" << r.answers_checked << " lce_calls=" << r.lce_calls << " range_visits=" << r.range_visits
            << "\n";
  return 0;
}

int cmd_bench(const std::string& mode_str, const std::string& grid, const std::string& alphabet, int ops,
              int samples, std::uint64_t seed) {
  Mode mode = parse_mode(mode_str);
  std::vector<Index> ns;
  std::stringstream in(grid);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) ns.push_back(parse_range(item).first);
  }
  std::cout << "n\tupdate_cost\tquery_cost\tlce_per_update\trange_visits_per_update\ttree_steps_per_update\tupdate_ms\n";
  std::vector<std::pair<double, double>> pts;
  for (Index n : ns) {
    BenchRow row = bench_point(mode, n, alphabet, ops, samples, seed);
    std::cout << row.n << "\t" << row.update_cost << "\t" << row.query_cost << "\t" << row.lce_per_update << "\t"
              << row.range_per_update << "\t" << row.tree_steps_per_update << "\t" << row.update_ms << "\n";
    pts.emplace_back(static_cast<double>(n), std::max(1.0, row.update_cost));
  }
  if (pts.size() >= 2) std::cerr << "update cost log-log slope: " << loglog_slope(pts) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic suffix array and inverted suffix array tool"};
  app.require_subcommand(1);

  std::string text_path, mode = "sa", script, queries = "all";
  auto* query = app.add_subcommand("query", "Apply an edit script to a text and answer lookups");
  query->add_option("text", text_path, "Text file, read as raw bytes")->required();
  query->add_option("--mode", mode, "isa, sa, bwt or lcp");
  query->add_option("--script", script, "Edit script file");
  query->add_option("--queries", queries, "Whitespace-separated ranks or positions, 'all', or a file holding them");

  FuzzConfig fuzz_cfg;
  std::string fuzz_mode = "isa", n_range = "16:128";
  auto* fuzz = app.add_subcommand("fuzz", "Differential test against the brute-force oracle");
  fuzz->add_option("--seed", fuzz_cfg.seed);
  fuzz->add_option("--n", n_range, "Text length N or range LO:HI");
  fuzz->add_option("--alphabet", fuzz_cfg.alphabet, "Symbols to draw from");
  fuzz->add_option("--ops", fuzz_cfg.ops, "Edits per text");
  fuzz->add_option("--texts", fuzz_cfg.texts, "Number of random texts");
  fuzz->add_option("--mode", fuzz_mode, "isa (substitutions) or sa (mixed edits)");
  fuzz->add_flag("--inject-fault", fuzz_cfg.inject_fault, "Corrupt one answer (fault-injection builds only)");

  std::string bench_mode = "isa", grid = "256,1024,4096", bench_alpha = "ab";
  int bench_ops = 20, samples = 50;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "Instrumented cost per edit and per lookup");
  bench->add_option("--mode", bench_mode, "isa or sa");
  bench->add_option("--n", grid, "Comma-separated text lengths");
  bench->add_option("--alphabet", bench_alpha);
  bench->add_option("--ops", bench_ops, "Edits per length");
  bench->add_option("--samples", samples, "Lookups per length");
  bench->add_option("--seed", bench_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*query) return cmd_query(text_path, mode, script, queries);
    if (*fuzz) {
      fuzz_cfg.mode = parse_mode(fuzz_mode);
      return cmd_fuzz(fuzz_cfg, n_range);
    }
    return cmd_bench(bench_mode, grid, bench_alpha, bench_ops, samples, bench_seed);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Unsupported& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
