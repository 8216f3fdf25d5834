// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances and calibrated constants are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "identities.hpp"

using namespace pcdt;

namespace {

constexpr double poly_tol = 1e-9;            // "exact" equality of float-weighted polynomials
constexpr double eval_rel_tol = 1e-9;        // extract-then-evaluate vs direct evaluation
constexpr double weight_sum_tol = 1e-12;     // normalized sum weights
constexpr double proportional_tol = 1e-9;    // old = Z * new
constexpr std::size_t depth_c1 = 2;          // depth(Psi) <= C1 * ceil(log2 n) + C2
constexpr std::size_t depth_c2 = 1;
constexpr double max_size_slope = 3.5;       // log-log slope of Psi node counts

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int index, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.require(false, "took " + std::to_string(secs) + " s, limit " + std::to_string(limit_s) + " s");
    o.pass = false;
  }
  failures += o.pass ? 0 : 1;
  std::printf("%s [%d] %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", index, name, secs, o.detail.empty() ? "" : ": ",
              o.detail.c_str());
  std::fflush(stdout);
}

/// 50 circuits, n in {4, 6, 8, 10}, mixed reuse and fan-out.
std::vector<Circuit> pipeline_corpus() {
  std::vector<Circuit> out;
  const std::size_t ns[] = {4, 6, 8, 10};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    out.push_back(testing::corpus_circuit(ns[seed % 4], 1000 + seed));
  }
  return out;
}

Outcome pstar_exactness() {
  Outcome o;
  for (std::size_t k = 1; k <= 3; ++k) {
    const std::size_t n = std::size_t{1} << (2 * k);
    const Circuit c = build_pstar(k);
    const auto s = structure_stats(c);
    const auto r = check_validity(c);
    o.require(c.size() == 2 * n - 1 + k * n, "k=" + std::to_string(k) + " nodes=" + std::to_string(c.size()));
    o.require(s.depth == 2 * k, "k=" + std::to_string(k) + " depth=" + std::to_string(s.depth));
    o.require(r.decomposable && r.smooth && r.homogeneous && r.monotone, "k=" + std::to_string(k) + " validity");
  }
  o.require(build_pstar(1).size() == 11 && build_pstar(2).size() == 63 && build_pstar(3).size() == 319, "sizes");
  if (o.pass) {
    o.detail = "sizes 11/63/319, depths 2/4/6";
  }
  return o;
}

Outcome reduction_exactness() {
  Outcome o;
  const std::size_t expected[] = {0, 2, 8, 128};
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto stripped = extract_polynomial(strip_negations(build_pstar(k)));
    const auto h = hk2_polynomial(k);
    o.require(poly_equal(stripped, h, 0.0), "k=" + std::to_string(k) + " polynomials differ");
    o.require(stripped.size() == expected[k], "k=" + std::to_string(k) + " monomials=" + std::to_string(stripped.size()));
  }
  if (o.pass) {
    o.detail = "monomials 2/8/128, coefficient-exact";
  }
  return o;
}

Outcome pipeline_correctness(const std::vector<Circuit>& corpus) {
  Outcome o;
  std::size_t max_tree = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Circuit& c = corpus[i];
    const auto r = treeify(c);
    const auto s = structure_stats(r.circuit);
    const auto v = check_validity(r.circuit);
    const std::string tag = "instance " + std::to_string(i);
    o.require(s.is_tree, tag + " not a tree");
    o.require(v.decomposable && v.smooth, tag + " invalid");
    o.require(poly_equal(extract_polynomial(c), extract_polynomial(r.circuit), poly_tol), tag + " polynomial differs");
    max_tree = std::max(max_tree, r.circuit.size());
  }
  if (o.pass) {
    o.detail = std::to_string(corpus.size()) + " instances, largest tree " + std::to_string(max_tree) + " nodes";
  }
  return o;
}

Outcome identity_suites(const std::vector<Circuit>& corpus) {
  Outcome o;
  testing::IdentityReport total;
  for (const Circuit& c : corpus) {
    const auto r = testing::check_identities(binarize(c));
    total.degree_and_scope += r.degree_and_scope;
    total.product_rule += r.product_rule;
    total.value_identity += r.value_identity;
    total.pair_identity += r.pair_identity;
  }
  const std::pair<const char*, const testing::Tally*> parts[] = {{"degree/scope", &total.degree_and_scope},
                                                                  {"product rule", &total.product_rule},
                                                                  {"value identity", &total.value_identity},
                                                                  {"pair identity", &total.pair_identity}};
  std::string summary;
  for (const auto& [name, t] : parts) {
    o.require(t->checked > 0, std::string(name) + ": nothing checked");
    o.require(t->violations == 0,
              std::string(name) + ": " + std::to_string(t->violations) + " violations, first " + t->first_violation);
    summary += std::string(summary.empty() ? "" : ", ") + name + " " + std::to_string(t->checked);
  }
  if (o.pass) {
    o.detail = summary + " checks, 0 violations";
  }
  return o;
}

Outcome depth_scaling() {
  Outcome o;
  const std::size_t ns[] = {4, 8, 16, 32};
  std::vector<double> xs;
  std::vector<double> ys;
  std::string depths;
  for (std::size_t n : ns) {
    std::vector<Circuit> inputs;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      inputs.push_back(testing::corpus_circuit(n, 500 + seed));
      inputs.push_back(random_chain_pc(n, seed, 2 + seed));
    }
    double total_nodes = 0;
    std::size_t worst = 0;
    for (const Circuit& c : inputs) {
      const Circuit psi = reduce_depth(binarize(c));
      const std::size_t d = structure_stats(psi).depth;
      worst = std::max(worst, d);
      o.require(d <= depth_c1 * ceil_log2(n) + depth_c2, "n=" + std::to_string(n) + " depth " + std::to_string(d));
      o.require(random_equivalence(c, psi, 16, n), "n=" + std::to_string(n) + " polynomial differs");
      total_nodes += static_cast<double>(psi.size());
    }
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(total_nodes / static_cast<double>(inputs.size())));
    depths += (depths.empty() ? "" : "/") + std::to_string(worst);
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  o.require(slope <= max_size_slope, "size slope " + std::to_string(slope));
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "max depths %s for n=4/8/16/32 (bound %zu*ceil(log2 n)+%zu), size slope %.2f",
                  depths.c_str(), depth_c1, depth_c2, slope);
    o.detail = buf;
  }
  return o;
}

Outcome transform_properties(const std::vector<Circuit>& corpus) {
  Outcome o;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Circuit& c = corpus[i];
    const std::string tag = "instance " + std::to_string(i);
    const auto ref = extract_polynomial(c);

    const Circuit b = binarize(c);
    o.require(structure_stats(b).max_fanout <= 2, tag + " binarize fan-out");
    o.require(b.size() - c.size() <= 2 * c.num_edges(), tag + " binarize growth");
    o.require(poly_equal(ref, extract_polynomial(b), poly_tol), tag + " binarize polynomial");

    const Circuit t = duplicate_to_tree(c);
    o.require(structure_stats(t).is_tree, tag + " duplicate not a tree");
    o.require(structure_stats(t).depth == structure_stats(c).depth, tag + " duplicate depth");
    o.require(poly_equal(ref, extract_polynomial(t), poly_tol), tag + " duplicate polynomial");

    const auto nr = normalize(c);
    for (const Node& n : nr.circuit.nodes()) {
      if (n.is_sum()) {
        const double total = std::accumulate(n.weights.begin(), n.weights.end(), 0.0);
        o.require(std::abs(total - 1.0) <= weight_sum_tol, tag + " normalize weight sum");
      }
    }
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> a(2 * c.num_vars());
      for (auto& x : a) {
        x = u(rng);
      }
      const Assignment point(a);
      o.require(approx_equal(evaluate(c, point), nr.root_constant * evaluate(nr.circuit, point), proportional_tol),
                tag + " normalize proportionality");
    }
  }
  if (o.pass) {
    o.detail = std::to_string(corpus.size()) + " instances";
  }
  return o;
}

Outcome oracle_consistency() {
  Outcome o;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Circuit c = testing::corpus_circuit(2 + seed % 9, 3000 + seed);
    const auto p = extract_polynomial(c);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> a(2 * c.num_vars());
      for (auto& x : a) {
        x = u(rng);
      }
      const Assignment point(a);
      o.require(approx_equal(p.evaluate(point), evaluate(c, point), eval_rel_tol),
                "circuit " + std::to_string(seed) + " evaluation mismatch");
    }
  }
  std::size_t detected = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Circuit c = testing::corpus_circuit(3 + seed % 6, 4000 + seed);
    std::vector<Node> nodes(c.nodes().begin(), c.nodes().end());
    std::vector<NodeId> sums;
    for (NodeId id = 0; id < nodes.size(); ++id) {
      if (nodes[id].is_sum()) {
        sums.push_back(id);
      }
    }
    const NodeId target = sums[seed % sums.size()];
    nodes[target].weights[0] *= 1.25;
    const Circuit mutated = build_circuit(c.num_vars(), std::move(nodes), c.root());
    if (!random_equivalence(c, mutated, 32, seed)) {
      ++detected;
    }
  }
  o.require(detected == 50, "mutations detected " + std::to_string(detected) + "/50");
  if (o.pass) {
    o.detail = "100 circuits x 20 points, 50/50 mutations detected";
  }
  return o;
}

Outcome smooth_homogeneous_corpus() {
  Outcome o;
  const auto corpus = testing::smooth_homogeneous_corpus(200, 7);
  std::size_t broken = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto r = check_validity(corpus[i]);
    o.require(r.decomposable, "instance " + std::to_string(i) + " not decomposable");
    o.require(r.smooth == r.homogeneous, "instance " + std::to_string(i) + " smooth != homogeneous");
    broken += r.smooth ? 0 : 1;
  }
  o.require(broken > 0 && broken < corpus.size(), "corpus lacks broken or intact instances");
  if (o.pass) {
    o.detail = std::to_string(corpus.size()) + " circuits, " + std::to_string(broken) + " non-smooth";
  }
  return o;
}

} // namespace

int main() {
  const auto corpus = pipeline_corpus();
  criterion(1, "P* size, depth and validity", 1.0, pstar_exactness);
  criterion(2, "stripped P* equals H^(k,2)", 5.0, reduction_exactness);
  criterion(3, "treeify: tree, valid, same polynomial", 60.0, [&] { return pipeline_correctness(corpus); });
  criterion(4, "derivative identity suites", 0.0, [&] { return identity_suites(corpus); });
  criterion(5, "reduce_depth depth bound and size trend", 120.0, depth_scaling);
  criterion(6, "binarize, duplicate, normalize properties", 0.0, [&] { return transform_properties(corpus); });
  criterion(7, "oracle consistency", 0.0, oracle_consistency);
  criterion(8, "smooth iff homogeneous corpus", 0.0, smooth_homogeneous_corpus);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
