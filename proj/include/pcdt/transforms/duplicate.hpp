#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "../circuit.hpp"

namespace pcdt {

inline constexpr std::size_t default_tree_budget = 10'000'000;

/// Expands the DAG into a tree by copying from the root without memoization:
/// a node with k parent paths is cloned k times. The copy is emitted
/// children-first, so the last node is the root.
inline Circuit duplicate_to_tree(const Circuit& c, std::size_t budget = default_tree_budget) {
  // Count the copies first so an oversized tree fails before allocating.
  std::vector<double> copies(c.size(), 0.0);
  const auto order = c.topological_order();
  copies[c.root()] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (NodeId ch : c.node(*it).children) {
      copies[ch] += copies[*it];
    }
  }
  double total = 0.0;
  for (double k : copies) {
    total += k;
  }
  if (total > static_cast<double>(budget)) {
    throw error(errc::size_budget_exceeded, "tree would have " + std::to_string(static_cast<long double>(total)) +
                                                " nodes; budget is " + std::to_string(budget));
  }

  std::vector<Node> out;
  out.reserve(static_cast<std::size_t>(total));
  struct Frame {
    NodeId source;
    std::size_t next = 0;
    std::vector<NodeId> kids;
  };
  std::vector<Frame> stack;
  stack.push_back({c.root(), 0, {}});
  NodeId last = 0;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const Node& n = c.node(f.source);
    if (f.next < n.children.size()) {
      const NodeId ch = n.children[f.next++];
      stack.push_back({ch, 0, {}});
      continue;
    }
    Node copy = n;
    copy.children = std::move(f.kids);
    out.push_back(std::move(copy));
    last = static_cast<NodeId>(out.size() - 1);
    stack.pop_back();
    if (!stack.empty()) {
      stack.back().kids.push_back(last);
    }
  }
  return build_circuit(c.num_vars(), std::move(out), last);
}

} // namespace pcdt
