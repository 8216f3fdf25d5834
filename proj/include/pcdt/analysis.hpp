#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "circuit.hpp"

namespace pcdt {

using VarSet = boost::dynamic_bitset<std::uint64_t>;

/// Relative comparison used for weights and coefficients throughout.
inline bool approx_equal(double a, double b, double tol = 1e-9) noexcept {
  if (a == b) {
    return true;
  }
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

/// Scope of every node, indexed by NodeId, in one bottom-up pass.
inline std::vector<VarSet> scope_sets(const Circuit& c) {
  std::vector<VarSet> scopes(c.size(), VarSet(c.num_vars()));
  for (NodeId id : c.topological_order()) {
    const Node& n = c.node(id);
    if (n.is_leaf()) {
      scopes[id].set(n.indicator.var.index);
    } else {
      for (NodeId ch : n.children) {
        scopes[id] |= scopes[ch];
      }
    }
  }
  return scopes;
}

inline std::vector<VarId> to_vars(const VarSet& set) {
  std::vector<VarId> vars;
  for (auto i = set.find_first(); i != VarSet::npos; i = set.find_next(i)) {
    vars.push_back(VarId{static_cast<std::uint32_t>(i)});
  }
  return vars;
}

inline std::vector<VarId> scope(const Circuit& c, NodeId v) {
  if (v >= c.size()) {
    throw error(errc::invalid_input, "node " + std::to_string(v) + " out of range");
  }
  return to_vars(scope_sets(c)[v]);
}

/// Structural degree of every node: leaf 1, product the sum over its
/// children, sum the maximum over its children. For homogeneous circuits this
/// is the polynomial degree of each node.
inline std::vector<std::size_t> structural_degrees(const Circuit& c) {
  std::vector<std::size_t> deg(c.size(), 0);
  for (NodeId id : c.topological_order()) {
    const Node& n = c.node(id);
    switch (n.kind) {
    case NodeKind::leaf: deg[id] = 1; break;
    case NodeKind::sum:
      for (NodeId ch : n.children) {
        deg[id] = std::max(deg[id], deg[ch]);
      }
      break;
    case NodeKind::product:
      for (NodeId ch : n.children) {
        deg[id] += deg[ch];
      }
      break;
    }
  }
  return deg;
}

inline std::size_t degree(const Circuit& c, NodeId v) {
  if (v >= c.size()) {
    throw error(errc::invalid_input, "node " + std::to_string(v) + " out of range");
  }
  return structural_degrees(c)[v];
}

/// Values for the 2n indicator slots; slot 2i is x_i and slot 2i+1 is ~x_i.
class Assignment {
public:
  Assignment() = default;
  explicit Assignment(std::vector<double> values) : values_(std::move(values)) {}

  /// x_i = ~x_i = 1 for every variable: the marginalization point.
  static Assignment ones(std::size_t num_vars) { return Assignment(std::vector<double>(2 * num_vars, 1.0)); }
  static Assignment zeros(std::size_t num_vars) { return Assignment(std::vector<double>(2 * num_vars, 0.0)); }
  /// Boolean point: x_i = bits[i], ~x_i = 1 - bits[i].
  static Assignment from_bits(const std::vector<bool>& bits) {
    std::vector<double> v(2 * bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      v[2 * i] = bits[i] ? 1.0 : 0.0;
      v[2 * i + 1] = bits[i] ? 0.0 : 1.0;
    }
    return Assignment(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t slot) const { return values_[slot]; }
  double& operator[](std::size_t slot) { return values_[slot]; }
  double value(Indicator ind) const { return values_[ind.slot()]; }
  std::span<const double> values() const noexcept { return values_; }

private:
  std::vector<double> values_;
};

/// Bottom-up evaluation of every node; returns the full value table.
inline std::vector<double> evaluate_all(const Circuit& c, const Assignment& a) {
  if (a.size() != 2 * c.num_vars()) {
    throw error(errc::assignment_length_mismatch,
                "assignment has " + std::to_string(a.size()) + " slots, expected " + std::to_string(2 * c.num_vars()));
  }
  std::vector<double> value(c.size(), 0.0);
  for (NodeId id : c.topological_order()) {
    const Node& n = c.node(id);
    switch (n.kind) {
    case NodeKind::leaf: value[id] = a.value(n.indicator); break;
    case NodeKind::sum: {
      double s = 0.0;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        s += n.weights[i] * value[n.children[i]];
      }
      value[id] = s;
      break;
    }
    case NodeKind::product: {
      double p = 1.0;
      for (NodeId ch : n.children) {
        p *= value[ch];
      }
      value[id] = p;
      break;
    }
    }
  }
  return value;
}

inline double evaluate(const Circuit& c, const Assignment& a) { return evaluate_all(c, a)[c.root()]; }

struct Witness {
  NodeId node = 0;
  std::string description;
};

struct ValidityReport {
  bool decomposable = true;
  bool smooth = true;
  bool homogeneous = true;
  bool normalized = true;
  bool monotone = true;
  std::optional<Witness> decomposable_witness;
  std::optional<Witness> smooth_witness;
  std::optional<Witness> homogeneous_witness;
  std::optional<Witness> normalized_witness;
  std::optional<Witness> monotone_witness;

  bool valid() const noexcept { return decomposable && smooth; }
};

/// Computes all five structural flags in one topological pass, recording
/// the first violating node (in topological order) for each failed flag.
///
/// Homogeneity is decided structurally: every sum node's children must share
/// one structural degree. Monotonicity is the syntactic condition that all
/// sum weights are non-negative.
inline ValidityReport check_validity(const Circuit& c) {
  ValidityReport r;
  const auto scopes = scope_sets(c);
  const auto deg = structural_degrees(c);
  auto fail = [](bool& flag, std::optional<Witness>& w, NodeId id, std::string what) {
    if (flag) {
      flag = false;
      w = Witness{id, std::move(what)};
    }
  };

  for (NodeId id : c.topological_order()) {
    const Node& n = c.node(id);
    if (n.is_product()) {
      VarSet seen(c.num_vars());
      for (NodeId ch : n.children) {
        if (seen.intersects(scopes[ch])) {
          fail(r.decomposable, r.decomposable_witness, id,
               "product children have overlapping scopes (child " + std::to_string(ch) + ")");
          break;
        }
        seen |= scopes[ch];
      }
    } else if (n.is_sum()) {
      const NodeId first = n.children.front();
      double total = 0.0;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        const NodeId ch = n.children[i];
        if (scopes[ch] != scopes[first]) {
          fail(r.smooth, r.smooth_witness, id,
               "sum children " + std::to_string(first) + " and " + std::to_string(ch) + " have different scopes");
        }
        if (deg[ch] != deg[first]) {
          fail(r.homogeneous, r.homogeneous_witness, id,
               "sum children " + std::to_string(first) + " and " + std::to_string(ch) + " have degrees " +
                   std::to_string(deg[first]) + " and " + std::to_string(deg[ch]));
        }
        if (n.weights[i] < 0.0) {
          fail(r.monotone, r.monotone_witness, id, "negative weight on edge to " + std::to_string(ch));
        }
        total += n.weights[i];
      }
      if (!approx_equal(total, 1.0)) {
        fail(r.normalized, r.normalized_witness, id, "weights sum to " + std::to_string(total));
      }
    }
  }
  return r;
}

struct Stats {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  std::size_t depth = 0;
  std::size_t max_fanout = 0;
  bool is_tree = true;
  std::size_t degree_of_root = 0;
};

/// Depth (longest directed path, in edges) of every node's sub-circuit.
inline std::vector<std::size_t> node_heights(const Circuit& c) {
  std::vector<std::size_t> h(c.size(), 0);
  for (NodeId id : c.topological_order()) {
    for (NodeId ch : c.node(id).children) {
      h[id] = std::max(h[id], h[ch] + 1);
    }
  }
  return h;
}

inline Stats structure_stats(const Circuit& c) {
  Stats s;
  s.num_nodes = c.size();
  s.num_edges = c.num_edges();
  s.depth = node_heights(c)[c.root()];
  for (NodeId id = 0; id < c.size(); ++id) {
    s.max_fanout = std::max(s.max_fanout, c.node(id).children.size());
    if (id != c.root() && c.num_parents(id) != 1) {
      s.is_tree = false;
    }
  }
  s.degree_of_root = structural_degrees(c)[c.root()];
  return s;
}

} // namespace pcdt
