#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace pcdt {

using NodeId = std::uint32_t;

struct VarId {
  std::uint32_t index = 0;

  friend auto operator<=>(const VarId&, const VarId&) = default;
};

/// A literal of a Boolean variable: `x_i` or its negation `~x_i`.
/// Indicators live in slots `2i` (positive) and `2i + 1` (negated).
struct Indicator {
  VarId var;
  bool negated = false;

  std::size_t slot() const noexcept { return 2 * std::size_t{var.index} + (negated ? 1 : 0); }
  static Indicator from_slot(std::size_t slot) noexcept {
    return {VarId{static_cast<std::uint32_t>(slot / 2)}, (slot % 2) == 1};
  }

  friend bool operator==(const Indicator&, const Indicator&) = default;
};

enum class NodeKind : std::uint8_t { leaf, sum, product };

inline constexpr const char* to_string(NodeKind kind) noexcept {
  switch (kind) {
  case NodeKind::leaf: return "leaf";
  case NodeKind::sum: return "sum";
  case NodeKind::product: return "product";
  }
  return "?";
}

struct Node {
  NodeKind kind = NodeKind::leaf;
  Indicator indicator{};         // leaf only
  std::vector<NodeId> children;  // sum, product
  std::vector<double> weights;   // sum only, parallel to children

  static Node leaf(VarId var, bool negated = false) {
    Node n;
    n.kind = NodeKind::leaf;
    n.indicator = {var, negated};
    return n;
  }
  static Node leaf(Indicator ind) { return leaf(ind.var, ind.negated); }
  static Node sum(std::vector<NodeId> children, std::vector<double> weights) {
    Node n;
    n.kind = NodeKind::sum;
    n.children = std::move(children);
    n.weights = std::move(weights);
    return n;
  }
  static Node product(std::vector<NodeId> children) {
    Node n;
    n.kind = NodeKind::product;
    n.children = std::move(children);
    return n;
  }

  bool is_leaf() const noexcept { return kind == NodeKind::leaf; }
  bool is_sum() const noexcept { return kind == NodeKind::sum; }
  bool is_product() const noexcept { return kind == NodeKind::product; }

  friend bool operator==(const Node&, const Node&) = default;
};

class Circuit;
Circuit build_circuit(std::size_t num_vars, std::vector<Node> nodes, NodeId root);

/// An immutable, validated rooted DAG of leaf/sum/product nodes.
///
/// Node ids are dense indices into the node table. The stored topological
/// order lists every child before each of its parents and ends at the root.
class Circuit {
public:
  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  NodeId root() const noexcept { return root_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::span<const NodeId> topological_order() const noexcept { return order_; }
  std::size_t num_parents(NodeId id) const { return in_degree_.at(id); }
  std::size_t num_edges() const noexcept { return num_edges_; }

  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.num_vars_ == b.num_vars_ && a.root_ == b.root_ && a.nodes_ == b.nodes_;
  }

private:
  friend Circuit build_circuit(std::size_t, std::vector<Node>, NodeId);
  Circuit() = default;

  std::size_t num_vars_ = 0;
  NodeId root_ = 0;
  std::vector<Node> nodes_;
  std::vector<NodeId> order_;
  std::vector<std::uint32_t> in_degree_;
  std::size_t num_edges_ = 0;
};

/// Validates a node table and freezes it into a Circuit.
///
/// Checks, in order: child ids in range, node shape, weights (non-negative,
/// not all zero), leaf variables `< num_vars`, acyclicity, and that `root`
/// is the only parentless node.
inline Circuit build_circuit(std::size_t num_vars, std::vector<Node> nodes, NodeId root) {
  if (num_vars == 0) {
    throw error(errc::invalid_input, "circuit needs at least one variable");
  }
  if (nodes.empty()) {
    throw error(errc::invalid_input, "circuit has no nodes");
  }
  const std::size_t count = nodes.size();
  if (root >= count) {
    throw error(errc::dangling_child, "root id " + std::to_string(root) + " out of range");
  }

  std::size_t edges = 0;
  for (std::size_t id = 0; id < count; ++id) {
    const Node& n = nodes[id];
    const std::string where = "node " + std::to_string(id);
    for (NodeId c : n.children) {
      if (c >= count) {
        throw error(errc::dangling_child, where + " references missing child " + std::to_string(c));
      }
    }
    switch (n.kind) {
    case NodeKind::leaf:
      if (!n.children.empty() || !n.weights.empty()) {
        throw error(errc::malformed_node, where + ": leaf with children or weights");
      }
      if (n.indicator.var.index >= num_vars) {
        throw error(errc::bad_variable, where + ": variable " + std::to_string(n.indicator.var.index) +
                                            " >= num_vars " + std::to_string(num_vars));
      }
      break;
    case NodeKind::sum: {
      if (n.children.empty()) {
        throw error(errc::malformed_node, where + ": sum without children");
      }
      if (n.children.size() != n.weights.size()) {
        throw error(errc::malformed_node, where + ": children/weights length mismatch");
      }
      bool any_positive = false;
      for (double w : n.weights) {
        if (!std::isfinite(w) || w < 0.0) {
          throw error(errc::bad_weights, where + ": weight " + std::to_string(w) + " is negative or not finite");
        }
        any_positive = any_positive || w > 0.0;
      }
      if (!any_positive) {
        throw error(errc::bad_weights, where + ": all weights are zero");
      }
      break;
    }
    case NodeKind::product:
      if (n.children.empty()) {
        throw error(errc::malformed_node, where + ": product without children");
      }
      if (!n.weights.empty()) {
        throw error(errc::malformed_node, where + ": product with weights");
      }
      break;
    }
    edges += n.children.size();
  }

  // Iterative DFS; post-order yields children before parents.
  enum class mark : std::uint8_t { fresh, open, done };
  std::vector<mark> state(count, mark::fresh);
  std::vector<NodeId> order;
  order.reserve(count);
  std::vector<std::pair<NodeId, std::size_t>> stack;
  auto visit_from = [&](NodeId start) {
    if (state[start] != mark::fresh) {
      return;
    }
    stack.emplace_back(start, 0);
    state[start] = mark::open;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const auto& kids = nodes[id].children;
      if (next < kids.size()) {
        NodeId c = kids[next++];
        if (state[c] == mark::open) {
          throw error(errc::cycle_detected, "edge " + std::to_string(id) + " -> " + std::to_string(c) + " closes a cycle");
        }
        if (state[c] == mark::fresh) {
          state[c] = mark::open;
          stack.emplace_back(c, 0);
        }
      } else {
        state[id] = mark::done;
        order.push_back(id);
        stack.pop_back();
      }
    }
  };
  visit_from(root);
  for (NodeId id = 0; id < count; ++id) {
    visit_from(id);
  }

  std::vector<std::uint32_t> in_degree(count, 0);
  for (const Node& n : nodes) {
    for (NodeId c : n.children) {
      ++in_degree[c];
    }
  }
  for (NodeId id = 0; id < count; ++id) {
    if (in_degree[id] == 0 && id != root) {
      throw error(errc::multiple_roots, "node " + std::to_string(id) + " has no parent but is not the root");
    }
  }
  if (in_degree[root] != 0) {
    throw error(errc::multiple_roots, "designated root " + std::to_string(root) + " has a parent");
  }

  // With a single parentless node every node is reachable from the root, so
  // rebuilding the order from the root alone gives one that ends at the root.
  std::fill(state.begin(), state.end(), mark::fresh);
  order.clear();
  visit_from(root);

  Circuit c;
  c.num_vars_ = num_vars;
  c.root_ = root;
  c.nodes_ = std::move(nodes);
  c.order_ = std::move(order);
  c.in_degree_ = std::move(in_degree);
  c.num_edges_ = edges;
  return c;
}

/// Incremental node-table construction; ids are handed out densely.
class CircuitBuilder {
public:
  explicit CircuitBuilder(std::size_t num_vars) : num_vars_(num_vars) {}

  NodeId add(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }
  NodeId leaf(std::uint32_t var, bool negated = false) { return add(Node::leaf(VarId{var}, negated)); }
  NodeId sum(std::vector<NodeId> children, std::vector<double> weights) {
    return add(Node::sum(std::move(children), std::move(weights)));
  }
  NodeId product(std::vector<NodeId> children) { return add(Node::product(std::move(children))); }

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t num_vars() const noexcept { return num_vars_; }
  Node& operator[](NodeId id) { return nodes_.at(id); }

  Circuit build(NodeId root) const { return build_circuit(num_vars_, nodes_, root); }
  /// Roots the circuit at the most recently added node.
  Circuit build() const { return build(static_cast<NodeId>(nodes_.size() - 1)); }

private:
  std::size_t num_vars_;
  std::vector<Node> nodes_;
};

} // namespace pcdt
