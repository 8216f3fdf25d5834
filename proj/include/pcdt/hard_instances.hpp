#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "circuit.hpp"

namespace pcdt {

inline constexpr std::size_t max_pstar_k = 4;

/// Layer bookkeeping for P*. Layer 0 holds the n plain leaves, odd layers
/// hold products, even layers sums, and layer 2k the root. Negation leaves
/// added under products belong to no layer.
struct PStarLayout {
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<std::optional<std::size_t>> layer_index;  // by NodeId
  /// (layer, 1-based position) for layered nodes: the label L_{layer,position}.
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> label;
  /// NodeIds of each layer, left to right.
  std::vector<std::vector<NodeId>> layers;
};

struct PStar {
  Circuit circuit;
  PStarLayout layout;
};

/// Builds the efficient depth-2k circuit for the hard polynomial over
/// n = 2^{2k} variables.
///
/// Pairs of consecutive nodes are multiplied on odd layers and summed (unit
/// weights) on even layers. At each product layer, every product also takes
/// the negation leaves of its sibling's scope before augmentation, so
/// siblings end up with equal scopes. Negation leaves are materialized once
/// per occurrence, giving exactly 2n - 1 + kn nodes.
inline PStar build_pstar_with_layout(std::size_t k) {
  if (k < 1 || k > max_pstar_k) {
    throw error(errc::k_too_large, "k must be in [1, " + std::to_string(max_pstar_k) + "], got " + std::to_string(k));
  }
  const std::size_t n = std::size_t{1} << (2 * k);
  CircuitBuilder b(n);
  PStarLayout layout;
  layout.k = k;
  layout.n = n;
  layout.layers.resize(2 * k + 1);

  std::vector<std::optional<std::size_t>> layer_of;
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> label;
  auto record = [&](NodeId id, std::optional<std::size_t> layer, std::size_t pos) {
    layer_of.resize(id + 1);
    label.resize(id + 1);
    if (layer) {
      layer_of[id] = layer;
      label[id] = std::make_pair(*layer, pos);
      layout.layers[*layer].push_back(id);
    }
  };

  for (std::uint32_t i = 0; i < n; ++i) {
    record(b.leaf(i), 0, i + 1);
  }
  for (std::size_t layer = 1; layer <= 2 * k; ++layer) {
    const auto& below = layout.layers[layer - 1];
    const std::size_t width = below.size() / 2;
    const std::size_t span = std::size_t{1} << layer;  // plain scope size at this layer
    for (std::size_t q = 0; q < width; ++q) {
      std::vector<NodeId> children = {below[2 * q], below[2 * q + 1]};
      if (layer % 2 == 1) {
        const std::size_t sibling = q ^ 1;
        for (std::size_t v = sibling * span; v < (sibling + 1) * span; ++v) {
          const NodeId neg = b.leaf(static_cast<std::uint32_t>(v), true);
          record(neg, std::nullopt, 0);
          children.push_back(neg);
        }
        record(b.product(std::move(children)), layer, q + 1);
      } else {
        record(b.sum(std::move(children), {1.0, 1.0}), layer, q + 1);
      }
    }
  }
  layout.layer_index = std::move(layer_of);
  layout.label = std::move(label);
  return PStar{b.build(layout.layers.back().front()), std::move(layout)};
}

inline Circuit build_pstar(std::size_t k) { return build_pstar_with_layout(k).circuit; }

/// Detaches every negation leaf. A product or sum left without children is
/// rejected, since that node would have computed a constant.
inline Circuit strip_negations(const Circuit& c) {
  const auto is_negation = [&](NodeId id) {
    const Node& n = c.node(id);
    return n.is_leaf() && n.indicator.negated;
  };
  if (is_negation(c.root())) {
    throw error(errc::invalid_input, "root is a negation leaf");
  }
  std::vector<NodeId> remap(c.size(), 0);
  std::vector<Node> out;
  for (NodeId id = 0; id < c.size(); ++id) {
    if (!is_negation(id)) {
      remap[id] = static_cast<NodeId>(out.size());
      out.push_back(c.node(id));
    }
  }
  for (NodeId id = 0; id < c.size(); ++id) {
    if (is_negation(id)) {
      continue;
    }
    Node& n = out[remap[id]];
    std::vector<NodeId> kept;
    std::vector<double> weights;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (!is_negation(n.children[i])) {
        kept.push_back(remap[n.children[i]]);
        if (n.is_sum()) {
          weights.push_back(n.weights[i]);
        }
      }
    }
    if (kept.empty() && !n.is_leaf()) {
      throw error(n.is_product() ? errc::empty_product_node : errc::empty_sum_node,
                  "node " + std::to_string(id) + " has only negation leaves as children");
    }
    n.children = std::move(kept);
    n.weights = std::move(weights);
  }
  return build_circuit(c.num_vars(), std::move(out), remap[c.root()]);
}

} // namespace pcdt
