#pragma once

// Exact-polynomial checks of the structural identities behind reduce_depth,
// shared by the property tests and the acceptance driver. Every check
// returns its number of violations and the number of instances it tried.

#include <random>
#include <string>
#include <vector>

#include "support.hpp"

namespace pcdt::testing {

struct Tally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string first_violation;

  void record(bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
      if (violations == 0) {
        first_violation = what;
      }
      ++violations;
    }
  }
  Tally& operator+=(const Tally& o) {
    if (violations == 0 && o.violations > 0) {
      first_violation = o.first_violation;
    }
    checked += o.checked;
    violations += o.violations;
    return *this;
  }
};

struct IdentityReport {
  Tally degree_and_scope;  // derivative is homogeneous of degree deg(v)-deg(w), vars in scope(v)\scope(w)
  Tally product_rule;      // derivative flows through the larger child
  Tally value_identity;    // f_v = sum over G_m of f_t * d_t f_v
  Tally pair_identity;     // d_w f_v = sum over G_m of d_w f_t * d_t f_v
};

/// All four identities on one binary, valid circuit. Derivatives come from
/// the substitution oracle, one batch per w.
inline IdentityReport check_identities(const Circuit& c) {
  IdentityReport rep;
  const std::size_t count = c.size();
  const auto deg = structural_degrees(c);
  const auto desc = descendant_sets(c);
  const auto scopes = scope_sets(c);
  const auto polys = node_polynomials(c);
  // d[w][v] = d_w f_v
  std::vector<std::vector<SparsePolynomial>> d;
  d.reserve(count);
  for (NodeId w = 0; w < count; ++w) {
    d.push_back(partial_derivatives_wrt(c, w, polys));
  }
  const auto label = [](const char* what, NodeId v, NodeId w, std::size_t m = 0) {
    return std::string(what) + " v=" + std::to_string(v) + " w=" + std::to_string(w) + " m=" + std::to_string(m);
  };

  for (NodeId w = 0; w < count; ++w) {
    for (NodeId v = 0; v < count; ++v) {
      const auto& p = d[w][v];
      if (p.is_zero()) {
        continue;
      }
      bool ok = desc[v].test(w) && p.is_homogeneous() && p.degree() == deg[v] - deg[w];
      const VarSet allowed = scopes[v] - scopes[w];
      ok = ok && p.variables().is_subset_of(allowed);
      rep.degree_and_scope.record(ok, label("degree/scope", v, w));
    }
  }

  for (NodeId v = 0; v < count; ++v) {
    const Node& n = c.node(v);
    if (!n.is_product() || n.children.size() != 2) {
      continue;
    }
    NodeId v1 = n.children[0];
    NodeId v2 = n.children[1];
    if (deg[v2] > deg[v1]) {
      std::swap(v1, v2);
    }
    for (NodeId w = 0; w < count; ++w) {
      if (w == v || deg[v] >= 2 * deg[w]) {
        continue;
      }
      const auto rhs = polys[v2] * d[w][v1];
      rep.product_rule.record(poly_equal(d[w][v], rhs), label("product rule", v, w));
    }
  }

  const std::size_t top = deg[c.root()];
  for (std::size_t m = 1; m <= top; ++m) {
    std::vector<NodeId> gm;
    for (NodeId t = 0; t < count; ++t) {
      if (in_gm(c.node(t), t, m, deg)) {
        gm.push_back(t);
      }
    }
    for (NodeId v = 0; v < count; ++v) {
      if (m < deg[v] && deg[v] <= 2 * m) {
        SparsePolynomial rhs(c.num_vars());
        for (NodeId t : gm) {
          if (!d[t][v].is_zero()) {
            rhs.add_scaled(polys[t] * d[t][v]);
          }
        }
        rep.value_identity.record(poly_equal(polys[v], rhs), label("value identity", v, v, m));
      }
    }
    for (NodeId w = 0; w < count; ++w) {
      if (deg[w] > m) {
        continue;
      }
      for (NodeId v = 0; v < count; ++v) {
        if (!(m < deg[v] && deg[v] < 2 * deg[w])) {
          continue;
        }
        SparsePolynomial rhs(c.num_vars());
        for (NodeId t : gm) {
          if (!d[w][t].is_zero() && !d[t][v].is_zero()) {
            rhs.add_scaled(d[w][t] * d[t][v]);
          }
        }
        rep.pair_identity.record(poly_equal(d[w][v], rhs), label("pair identity", v, w, m));
      }
    }
  }
  return rep;
}

/// Decomposable circuits whose root has full scope and structural degree
/// n, about half of them broken on purpose: some sum child is swapped for
/// a product of leaves over a proper subset of its scope, or a leaf of a
/// variable in scope is added as an extra sum child.
inline std::vector<Circuit> smooth_homogeneous_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Circuit> out;
  std::uint64_t s = 0;
  while (out.size() < count) {
    ++s;
    const std::size_t n = 3 + s % 6;
    const Circuit base = corpus_circuit(n, seed * 1000 + s);
    if (s % 2 == 0) {
      out.push_back(base);
      continue;
    }
    const auto scopes = scope_sets(base);
    std::vector<NodeId> sums;
    for (NodeId id = 0; id < base.size(); ++id) {
      if (base.node(id).is_sum() && scopes[id].count() >= 2) {
        sums.push_back(id);
      }
    }
    if (sums.empty()) {
      continue;
    }
    std::vector<Node> nodes(base.nodes().begin(), base.nodes().end());
    const NodeId target = sums[std::uniform_int_distribution<std::size_t>(0, sums.size() - 1)(rng)];
    const auto vars = to_vars(scopes[target]);
    auto add = [&](Node node) {
      nodes.push_back(std::move(node));
      return static_cast<NodeId>(nodes.size() - 1);
    };
    if (rng() % 2 == 0) {
      // proper subset of the scope, at least one variable
      const std::size_t keep = std::uniform_int_distribution<std::size_t>(1, vars.size() - 1)(rng);
      std::vector<NodeId> leaves;
      for (std::size_t i = 0; i < keep; ++i) {
        leaves.push_back(add(Node::leaf(vars[i], rng() % 2 == 0)));
      }
      const NodeId sub = leaves.size() == 1 ? leaves.front() : add(Node::product(leaves));
      const NodeId replaced = nodes[target].children.back();
      nodes[target].children.back() = sub;
      // the replaced child may now be orphaned; keep it reachable through
      // an extra sum edge only if it would otherwise dangle
      bool still_used = false;
      for (const Node& node : nodes) {
        still_used = still_used || std::find(node.children.begin(), node.children.end(), replaced) != node.children.end();
      }
      if (!still_used) {
        nodes[target].children.push_back(replaced);
        nodes[target].weights.push_back(0.5);
      }
    } else {
      const VarId v = vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)];
      const NodeId extra = add(Node::leaf(v, rng() % 2 == 0));
      nodes[target].children.push_back(extra);
      nodes[target].weights.push_back(0.5);
    }
    const Circuit broken = build_circuit(base.num_vars(), std::move(nodes), base.root());
    const auto r = check_validity(broken);
    if (r.decomposable && degree(broken, broken.root()) == n && scope(broken, broken.root()).size() == n) {
      out.push_back(broken);
    }
  }
  return out;
}

} // namespace pcdt::testing
