#pragma once

#include <vector>

#include "../circuit.hpp"

namespace pcdt {

struct NormalizeResult {
  Circuit circuit;
  double root_constant = 1.0;
};

/// Locally renormalizes every sum node, pushing the excess mass upward.
///
/// Every node v gets a constant Z_v with f_v = Z_v * g_v, where g_v is the
/// normalized node: leaves have Z = 1, products multiply their children's
/// constants, and a sum with weights w_i gets Z = sum_i w_i Z_i and new
/// weights w_i Z_i / Z. The old circuit equals root_constant times the new.
inline NormalizeResult normalize(const Circuit& c) {
  std::vector<double> z(c.size(), 1.0);
  std::vector<Node> nodes(c.nodes().begin(), c.nodes().end());
  for (NodeId id : c.topological_order()) {
    Node& n = nodes[id];
    if (n.is_product()) {
      double prod = 1.0;
      for (NodeId ch : n.children) {
        prod *= z[ch];
      }
      z[id] = prod;
    } else if (n.is_sum()) {
      double total = 0.0;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (n.weights[i] < 0.0) {
          throw error(errc::bad_weights, "normalize needs non-negative weights (node " + std::to_string(id) + ")");
        }
        total += n.weights[i] * z[n.children[i]];
      }
      if (!(total > 0.0)) {
        throw error(errc::zero_weight_sum, "sum node " + std::to_string(id) + " has zero total weight");
      }
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        n.weights[i] = n.weights[i] * z[n.children[i]] / total;
      }
      z[id] = total;
    }
  }
  return {build_circuit(c.num_vars(), std::move(nodes), c.root()), z[c.root()]};
}

} // namespace pcdt
