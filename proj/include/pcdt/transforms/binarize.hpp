#pragma once

#include <vector>

#include "../analysis.hpp"
#include "../circuit.hpp"

namespace pcdt {

/// Rewrites every node with k > 2 children into a chain of alternating
/// intermediate nodes so that no node has more than two children.
///
/// A sum over M1..Mk keeps M1 and a unary product; that product feeds an
/// intermediate sum over M2 and the next unary product, and so on until an
/// intermediate sum holds Mk alone. Products are rewritten the same way with
/// the roles of sum and product exchanged. Each such node gains 2(k-1)
/// intermediates. Nodes with at most two children are copied unchanged.
inline Circuit binarize(const Circuit& c) {
  const auto report = check_validity(c);
  if (!report.valid()) {
    throw error(errc::invalid_input, "binarize expects a decomposable and smooth circuit");
  }
  CircuitBuilder b(c.num_vars());
  std::vector<NodeId> remap(c.size(), 0);
  for (NodeId id : c.topological_order()) {
    const Node& n = c.node(id);
    if (n.is_leaf()) {
      remap[id] = b.add(n);
      continue;
    }
    std::vector<NodeId> kids;
    kids.reserve(n.children.size());
    for (NodeId ch : n.children) {
      kids.push_back(remap[ch]);
    }
    const std::size_t k = kids.size();
    if (k <= 2) {
      remap[id] = n.is_sum() ? b.sum(kids, n.weights) : b.product(kids);
      continue;
    }
    // Build the chain bottom-up: the innermost intermediate wraps Mk alone.
    NodeId tail;
    if (n.is_sum()) {
      tail = b.sum({kids[k - 1]}, {n.weights[k - 1]});
      tail = b.product({tail});
      for (std::size_t i = k - 2; i >= 1; --i) {
        tail = b.sum({kids[i], tail}, {n.weights[i], 1.0});
        tail = b.product({tail});
      }
      remap[id] = b.sum({kids[0], tail}, {n.weights[0], 1.0});
    } else {
      tail = b.product({kids[k - 1]});
      tail = b.sum({tail}, {1.0});
      for (std::size_t i = k - 2; i >= 1; --i) {
        tail = b.product({kids[i], tail});
        tail = b.sum({tail}, {1.0});
      }
      remap[id] = b.product({kids[0], tail});
    }
  }
  return b.build(remap[c.root()]);
}

} // namespace pcdt
