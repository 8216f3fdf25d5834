#pragma once

#include <optional>
#include <vector>

#include "../circuit.hpp"
#include "../polynomial.hpp"
#include "gm.hpp"

namespace pcdt {

/// Exact polynomials of the nodes whose structural degree is at most
/// `limit`; other entries stay empty. In a homogeneous decomposable circuit
/// the children of such nodes are themselves within the limit.
inline std::vector<std::optional<SparsePolynomial>> low_degree_polynomials(const Circuit& c,
                                                                           const std::vector<std::size_t>& deg,
                                                                           std::size_t limit) {
  std::vector<std::optional<SparsePolynomial>> poly(c.size());
  for (NodeId id : c.topological_order()) {
    if (deg[id] > limit) {
      continue;
    }
    const Node& n = c.node(id);
    if (n.is_leaf()) {
      poly[id] = SparsePolynomial::indicator(c.num_vars(), n.indicator);
    } else if (n.is_sum()) {
      SparsePolynomial acc(c.num_vars());
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        acc.add_scaled(poly[n.children[i]].value(), n.weights[i]);
      }
      poly[id] = std::move(acc);
    } else {
      SparsePolynomial acc = SparsePolynomial::constant(c.num_vars(), 1.0);
      for (NodeId ch : n.children) {
        acc = acc.multiply(poly[ch].value(), default_term_budget());
      }
      poly[id] = std::move(acc);
    }
  }
  return poly;
}

/// ∂_w f_x by the chain rule, for every x that has `w` below it and
/// deg(x) - deg(w) <= max_gap. Only the cone between x and w is walked, and
/// the sibling factors met on the way have degree at most `max_gap`, so
/// `low` must hold every polynomial up to that degree. Entries outside the
/// computed range stay empty.
inline std::vector<std::optional<SparsePolynomial>> chain_rule_derivatives(
    const Circuit& c, NodeId w, std::size_t max_gap, const std::vector<std::size_t>& deg,
    const std::vector<std::optional<SparsePolynomial>>& low, const std::vector<NodeSet>& desc) {
  std::vector<std::optional<SparsePolynomial>> d(c.size());
  d[w] = SparsePolynomial::constant(c.num_vars(), 1.0);
  for (NodeId id : c.topological_order()) {
    if (id == w || !desc[id].test(w) || deg[id] > deg[w] + max_gap) {
      continue;
    }
    const Node& n = c.node(id);
    if (n.is_sum()) {
      SparsePolynomial acc(c.num_vars());
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (desc[n.children[i]].test(w)) {
          acc.add_scaled(d[n.children[i]].value(), n.weights[i]);
        }
      }
      d[id] = std::move(acc);
      continue;
    }
    std::optional<std::size_t> through;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (desc[n.children[i]].test(w)) {
        if (through) {
          throw error(errc::invalid_input, "node " + std::to_string(w) + " is shared by two factors of product " +
                                               std::to_string(id) + "; circuit is not decomposable");
        }
        through = i;
      }
    }
    SparsePolynomial acc = d[n.children[*through]].value();
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i != *through) {
        acc = acc.multiply(low[n.children[i]].value(), default_term_budget());
      }
    }
    d[id] = std::move(acc);
  }
  return d;
}

} // namespace pcdt
