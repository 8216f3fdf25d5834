// pcdt: generate, transform, check and compare probabilistic circuits.
//
// Exit codes: 0 success, 1 negative verdict (check/equiv), 2 usage error,
// 3 library error (bad input file, failed pass, exhausted budget).

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "pcdt/pcdt.hpp"

namespace {

using namespace pcdt;

constexpr int exit_negative = 1;
constexpr int exit_usage = 2;
constexpr int exit_module = 3;

class Stopwatch {
public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void print_timing(const Stopwatch& sw) { std::printf("# elapsed_ms=%.3f\n", sw.ms()); }

struct Options {
  // gen-random
  std::size_t n = 8;
  std::uint64_t seed = 0;
  double reuse = 0.0;
  std::size_t max_fanout = 3;
  std::string shape = "balanced";
  std::size_t width = 2;
  // gen-hard
  std::size_t k = 1;
  bool strip = false;
  // shared
  std::string in;
  std::string out;
  // transform
  std::string pass;
  bool normalize_output = false;
  // equiv
  std::string a;
  std::string b;
  bool exact = false;
  std::size_t trials = 64;
  std::uint64_t equiv_seed = 0;
  // stats
  bool csv = false;
  bool pipeline = false;
};

int run_gen_random(const Options& o) {
  Circuit c = o.shape == "chain" ? random_chain_pc(o.n, o.seed, o.width)
                                 : random_valid_pc(GenParams{o.n, o.seed, o.reuse, o.max_fanout});
  write_circuit(c, o.out);
  std::printf("nodes=%zu\n", c.size());
  return 0;
}

int run_gen_hard(const Options& o) {
  Circuit c = build_pstar(o.k);
  if (o.strip) {
    c = strip_negations(c);
  }
  write_circuit(c, o.out);
  std::printf("nodes=%zu\n", c.size());
  return 0;
}

int run_transform(const Options& o) {
  const Circuit c = read_circuit(o.in);
  Stopwatch sw;
  PipelineReport report;
  Circuit result = c;
  if (o.pass == "treeify") {
    auto r = treeify(c, TreeifyOptions{o.normalize_output});
    result = std::move(r.circuit);
    report = std::move(r.report);
  } else {
    report.record("input", c);
    if (o.pass == "binarize") {
      result = binarize(c);
      report.record("binarize", result);
    } else if (o.pass == "reduce-depth") {
      result = reduce_depth(c);
      report.record("reduce_depth", result);
    } else if (o.pass == "duplicate") {
      result = duplicate_to_tree(c);
      report.record("duplicate", result);
    } else {
      auto [normed, z] = normalize(c);
      result = std::move(normed);
      report.record("normalize", result);
      report.root_constant = z;
    }
  }
  write_circuit(result, o.out);
  std::fputs(to_key_value(report).c_str(), stdout);
  print_timing(sw);
  return 0;
}

int run_check(const Options& o) {
  const Circuit c = read_circuit(o.in);
  const auto r = check_validity(c);
  std::fputs(to_text(r).c_str(), stdout);
  return r.valid() ? 0 : exit_negative;
}

int run_equiv(const Options& o) {
  const Circuit a = read_circuit(o.a);
  const Circuit b = read_circuit(o.b);
  Stopwatch sw;
  bool same = false;
  if (a.num_vars() != b.num_vars()) {
    same = false;
  } else if (o.exact) {
    same = poly_equal(extract_polynomial(a), extract_polynomial(b));
  } else {
    same = random_equivalence(a, b, o.trials, o.equiv_seed);
  }
  std::puts(same ? "EQUAL" : "UNEQUAL");
  print_timing(sw);
  return same ? 0 : exit_negative;
}

int run_stats(const Options& o) {
  const Circuit c = read_circuit(o.in);
  if (o.pipeline) {
    Stopwatch sw;
    const auto r = treeify(c);
    std::fputs((o.csv ? to_csv(r.report) : to_key_value(r.report)).c_str(), stdout);
    print_timing(sw);
    return 0;
  }
  if (o.csv) {
    PipelineReport r;
    r.record("input", c);
    std::fputs(to_csv(r).c_str(), stdout);
  } else {
    std::fputs(pcdt::to_text(structure_stats(c)).c_str(), stdout);
  }
  return 0;
}

int run_export_dot(const Options& o) {
  write_text(o.out, to_dot(read_circuit(o.in)));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic circuit depth reduction and tree expansion"};
  app.require_subcommand(1);
  Options o;

  auto* gen_random = app.add_subcommand("gen-random", "Write a random valid circuit");
  gen_random->add_option("--n", o.n, "Number of variables")->check(CLI::Range(2, 4096));
  gen_random->add_option("--seed", o.seed, "Random seed");
  gen_random->add_option("--reuse", o.reuse, "Probability of reusing a sub-circuit")->check(CLI::Range(0.0, 1.0));
  gen_random->add_option("--max-fanout", o.max_fanout, "Largest sum/product fan-out")->check(CLI::Range(2, 64));
  gen_random->add_option("--shape", o.shape, "balanced (scope partitions) or chain (deep caterpillar)")
      ->check(CLI::IsMember({"balanced", "chain"}));
  gen_random->add_option("--width", o.width, "Nodes per level for --shape chain")->check(CLI::Range(1, 1024));
  gen_random->add_option("--out", o.out, "Output file")->required();

  auto* gen_hard = app.add_subcommand("gen-hard", "Write the hard instance P* for parameter k");
  gen_hard->add_option("--k", o.k, "Instance parameter; n = 4^k variables")->required();
  gen_hard->add_flag("--strip-negations", o.strip, "Drop negation leaves (yields H^(k,2))");
  gen_hard->add_option("--out", o.out, "Output file")->required();

  auto* transform = app.add_subcommand("transform", "Run one pass or the whole tree pipeline");
  transform->add_option("--pass", o.pass, "Pass to run")
      ->required()
      ->check(CLI::IsMember({"binarize", "normalize", "reduce-depth", "duplicate", "treeify"}));
  transform->add_option("--in", o.in, "Input file")->required();
  transform->add_option("--out", o.out, "Output file")->required();
  transform->add_flag("--normalize-output", o.normalize_output, "Normalize the tree (treeify only)");

  auto* check = app.add_subcommand("check", "Print the validity report; exit 0 iff decomposable and smooth");
  check->add_option("--in", o.in, "Input file")->required();

  auto* equiv = app.add_subcommand("equiv", "Compare the polynomials of two circuits");
  equiv->add_option("--a", o.a, "First circuit")->required();
  equiv->add_option("--b", o.b, "Second circuit")->required();
  auto* exact = equiv->add_flag("--exact", o.exact, "Expand both polynomials");
  equiv->add_option("--trials", o.trials, "Random evaluation points")->excludes(exact);
  equiv->add_option("--seed", o.equiv_seed, "Seed for the evaluation points")->excludes(exact);

  auto* stats = app.add_subcommand("stats", "Print structural statistics");
  stats->add_option("--in", o.in, "Input file")->required();
  stats->add_flag("--csv", o.csv, "CSV rows stage,nodes,edges,depth");
  stats->add_flag("--pipeline", o.pipeline, "Report every stage of the tree pipeline");

  auto* dot = app.add_subcommand("export-dot", "Write a Graphviz file");
  dot->add_option("--in", o.in, "Input file")->required();
  dot->add_option("--out", o.out, "Output .dot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*gen_random) return run_gen_random(o);
    if (*gen_hard) return run_gen_hard(o);
    if (*transform) return run_transform(o);
    if (*check) return run_check(o);
    if (*equiv) return run_equiv(o);
    if (*stats) return run_stats(o);
    if (*dot) return run_export_dot(o);
  } catch (const pcdt::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_module;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_module;
  }
  return exit_usage;
}
