#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "../analysis.hpp"
#include "../circuit.hpp"
#include "../polynomial.hpp"
#include "derivative.hpp"
#include "gm.hpp"

namespace pcdt {

/// Identifies a gate of the depth-reduced circuit: either the value f_v of
/// a source node, or the partial derivative ∂_w f_u of a source pair.
struct GateKey {
  enum class Kind : std::uint8_t { value, pair };

  Kind kind = Kind::value;
  NodeId u = 0;
  NodeId w = 0;

  static GateKey value(NodeId v) { return {Kind::value, v, v}; }
  static GateKey pair(NodeId u, NodeId w) { return {Kind::pair, u, w}; }

  friend auto operator<=>(const GateKey&, const GateKey&) = default;
};

/// A gate is `scale` times a node, or the constant `scale` when there is
/// no node. Constants are never materialized; they end up in edge weights.
struct GateRef {
  double scale = 0.0;
  std::optional<NodeId> node;

  bool is_zero() const noexcept { return scale == 0.0; }
  bool is_constant() const noexcept { return !node; }
};

struct GateEntry {
  GateKey key;
  int band = -1;            // -1 for the degree <= 1 pre-pass
  std::size_t degree = 0;   // degree of the gate's polynomial
  GateRef ref;              // node ids refer to the final circuit
  bool pruned = false;      // materialized but unreachable from the root, so ref has no node

  bool is_constant() const noexcept { return !pruned && !ref.node; }
};

struct PsiBuildState {
  std::map<GateKey, GateEntry> gate_table;
  std::size_t num_bands = 0;
  int current_band = -1;
};

struct PsiResult {
  Circuit psi;
  PsiBuildState state;
};

inline std::size_t ceil_log2(std::size_t n) {
  std::size_t b = 0;
  while ((std::size_t{1} << b) < n) {
    ++b;
  }
  return b;
}

namespace detail {

/// Node table for Ψ. Factors and summands are folded on the way in: zero
/// summands vanish, constants move into coefficients, repeated summands
/// merge, and a single weighted summand is passed through as a scaled
/// reference instead of a unary sum.
class PsiBuilder {
public:
  explicit PsiBuilder(std::size_t num_vars) : num_vars_(num_vars), leaves_(2 * num_vars) {}

  GateRef leaf(Indicator ind) {
    auto& slot = leaves_[ind.slot()];
    if (!slot) {
      slot = add(Node::leaf(ind));
    }
    return {1.0, slot};
  }

  GateRef product(std::initializer_list<GateRef> factors) {
    double scale = 1.0;
    std::vector<NodeId> kids;
    for (const GateRef& f : factors) {
      if (f.is_zero()) {
        return {};
      }
      scale *= f.scale;
      if (f.node) {
        kids.push_back(*f.node);
      }
    }
    if (kids.empty()) {
      return {scale, std::nullopt};
    }
    if (kids.size() == 1) {
      return {scale, kids.front()};
    }
    return {scale, add(Node::product(std::move(kids)))};
  }

  GateRef sum(const std::vector<GateRef>& terms) {
    double constant = 0.0;
    bool has_constant = false;
    std::map<NodeId, double> weight;
    for (const GateRef& t : terms) {
      if (t.is_zero()) {
        continue;
      }
      if (t.node) {
        weight[*t.node] += t.scale;
      } else {
        constant += t.scale;
        has_constant = true;
      }
    }
    std::erase_if(weight, [](const auto& kv) { return kv.second == 0.0; });
    if (has_constant && !weight.empty()) {
      throw error(errc::not_homogeneous, "gate mixes constant and non-constant summands");
    }
    if (weight.empty()) {
      return {constant, std::nullopt};
    }
    if (weight.size() == 1) {
      return {weight.begin()->second, weight.begin()->first};
    }
    std::vector<NodeId> kids;
    std::vector<double> ws;
    for (const auto& [id, wgt] : weight) {
      kids.push_back(id);
      ws.push_back(wgt);
    }
    return {1.0, add(Node::sum(std::move(kids), std::move(ws)))};
  }

  /// Realizes a polynomial of degree at most one over indicator leaves.
  GateRef affine(const SparsePolynomial& p) {
    std::vector<GateRef> terms;
    for (const Term& t : p.terms()) {
      if (t.monomial.degree() > 1) {
        throw error(errc::invalid_input, "affine gate with a degree > 1 term");
      }
      if (t.monomial.empty()) {
        terms.push_back({t.coeff, std::nullopt});
      } else {
        GateRef l = leaf(Indicator::from_slot(t.monomial.slots().front()));
        terms.push_back({t.coeff, l.node});
      }
    }
    return sum(terms);
  }

  /// Keeps only what the root reaches, renumbers children-first, and
  /// returns the circuit plus the builder-to-circuit id map.
  std::pair<Circuit, std::vector<std::optional<NodeId>>> finish(GateRef root) {
    if (!root.node) {
      throw error(errc::invalid_input, "root gate is constant");
    }
    NodeId top = *root.node;
    if (root.scale != 1.0) {
      top = add(Node::sum({top}, {root.scale}));
    }
    std::vector<std::optional<NodeId>> remap(nodes_.size());
    std::vector<Node> out;
    std::vector<std::pair<NodeId, std::size_t>> stack{{top, 0}};
    std::vector<bool> seen(nodes_.size(), false);
    seen[top] = true;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const auto& kids = nodes_[id].children;
      if (next < kids.size()) {
        const NodeId ch = kids[next++];
        if (!seen[ch]) {
          seen[ch] = true;
          stack.emplace_back(ch, 0);
        }
        continue;
      }
      Node n = nodes_[id];
      for (auto& ch : n.children) {
        ch = *remap[ch];
      }
      remap[id] = static_cast<NodeId>(out.size());
      out.push_back(std::move(n));
      stack.pop_back();
    }
    const auto root_id = static_cast<NodeId>(out.size() - 1);
    return {build_circuit(num_vars_, std::move(out), root_id), std::move(remap)};
  }

private:
  NodeId add(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  std::size_t num_vars_;
  std::vector<Node> nodes_;
  std::vector<std::optional<NodeId>> leaves_;
};

} // namespace detail

/// Rebuilds a binary, decomposable, smooth circuit as Ψ: a circuit for the
/// same polynomial whose depth grows with the logarithm of the root degree.
///
/// Gates are built band by band. The pre-pass realizes every degree-1 value
/// and every derivative ∂_w f_u with deg(u) - deg(w) <= 1 as a depth-one
/// network over the leaves (or a constant). Band i, with m = 2^i, then
/// builds the values with m < deg(v) <= 2m as
///     f_v    = sum_{t in G_m below v} f_{t1} * f_{t2} * ∂_t f_v
/// and the derivatives with m < deg(u) - deg(w) <= 2m, deg(u) < 2 deg(w), as
///     ∂_w f_u = sum_{t in G_{m + deg w} below u} f_{t2} * ∂_w f_{t1} * ∂_t f_u
/// where deg(t1) >= deg(t2). Every factor was produced by an earlier band or
/// by the value step of the current one; a missing factor is reported as
/// MissingGate. Gates not reachable from the root are dropped from Ψ.
inline PsiResult reduce_depth_detailed(const Circuit& c) {
  if (max_fanout(c) > 2) {
    throw error(errc::not_binary, "reduce_depth expects a binary circuit; run binarize first");
  }
  const auto report = check_validity(c);
  if (!report.decomposable) {
    throw error(errc::invalid_input, "reduce_depth expects a decomposable circuit");
  }
  if (!report.homogeneous) {
    throw error(errc::not_homogeneous, "reduce_depth expects a homogeneous circuit");
  }
  if (!report.smooth) {
    throw error(errc::invalid_input, "reduce_depth expects a smooth circuit");
  }

  const std::size_t count = c.size();
  const auto deg = structural_degrees(c);
  const auto desc = descendant_sets(c);
  std::vector<NodeSet> anc(count, NodeSet(count));
  for (NodeId x = 0; x < count; ++x) {
    for (auto t = desc[x].find_first(); t != NodeSet::npos; t = desc[x].find_next(t)) {
      anc[t].set(x);
    }
  }
  const std::size_t root_degree = deg[c.root()];
  const std::size_t bands = ceil_log2(root_degree);

  detail::PsiBuilder psi(c.num_vars());
  PsiBuildState state;
  state.num_bands = bands;
  std::unordered_map<std::uint64_t, GateRef> table;
  auto encode = [count](const GateKey& k) {
    return (static_cast<std::uint64_t>(k.u) * count + k.w) * 2 + (k.kind == GateKey::Kind::pair ? 1 : 0);
  };
  auto put = [&](const GateKey& key, std::size_t degree, GateRef ref) {
    table[encode(key)] = ref;
    state.gate_table[key] = GateEntry{key, state.current_band, degree, ref, false};
  };
  auto get = [&](const GateKey& key) -> GateRef {
    auto it = table.find(encode(key));
    if (it == table.end()) {
      throw error(errc::missing_gate, std::string(key.kind == GateKey::Kind::value ? "value " : "pair ") +
                                          std::to_string(key.u) + "," + std::to_string(key.w) +
                                          " is needed before it was built (band " +
                                          std::to_string(state.current_band) + ")");
    }
    return it->second;
  };

  // Pre-pass: degree-1 values and derivative pairs with degree gap <= 1.
  const auto low = low_degree_polynomials(c, deg, 1);
  for (NodeId v : c.topological_order()) {
    if (deg[v] == 1) {
      const Node& n = c.node(v);
      put(GateKey::value(v), 1, n.is_leaf() ? psi.leaf(n.indicator) : psi.affine(*low[v]));
    }
  }
  for (NodeId w : c.topological_order()) {
    const auto d = chain_rule_derivatives(c, w, 1, deg, low, desc);
    for (NodeId u : c.topological_order()) {
      if (anc[w].test(u) && deg[u] <= deg[w] + 1 && deg[u] < 2 * deg[w]) {
        put(GateKey::pair(u, w), deg[u] - deg[w], psi.affine(d[u].value()));
      }
    }
  }

  std::vector<std::optional<NodeSet>> gm_cache(root_degree + 1);
  auto gm_bits = [&](std::size_t m) -> const NodeSet& {
    auto& slot = gm_cache[std::min(m, root_degree)];
    if (!slot) {
      slot = NodeSet(count);
      for (NodeId t = 0; t < count; ++t) {
        if (in_gm(c.node(t), t, m, deg)) {
          slot->set(t);
        }
      }
    }
    return *slot;
  };

  for (std::size_t i = 0; i < bands; ++i) {
    state.current_band = static_cast<int>(i);
    const std::size_t m = std::size_t{1} << i;

    for (NodeId v : c.topological_order()) {
      if (deg[v] <= m || deg[v] > 2 * m) {
        continue;
      }
      const NodeSet frontier = gm_bits(m) & desc[v];
      std::vector<GateRef> terms;
      for (auto t = frontier.find_first(); t != NodeSet::npos; t = frontier.find_next(t)) {
        const auto& kids = c.node(static_cast<NodeId>(t)).children;
        terms.push_back(psi.product({get(GateKey::value(kids[0])), get(GateKey::value(kids[1])),
                                     get(GateKey::pair(v, static_cast<NodeId>(t)))}));
      }
      put(GateKey::value(v), deg[v], psi.sum(terms));
    }

    for (NodeId u : c.topological_order()) {
      if (deg[u] <= m + 1) {
        continue;
      }
      for (auto wb = desc[u].find_first(); wb != NodeSet::npos; wb = desc[u].find_next(wb)) {
        const auto w = static_cast<NodeId>(wb);
        const std::size_t gap = deg[u] - deg[w];
        if (gap <= m || gap > 2 * m || deg[u] >= 2 * deg[w]) {
          continue;
        }
        const NodeSet frontier = gm_bits(m + deg[w]) & desc[u] & anc[w];
        std::vector<GateRef> terms;
        for (auto t = frontier.find_first(); t != NodeSet::npos; t = frontier.find_next(t)) {
          const auto& kids = c.node(static_cast<NodeId>(t)).children;
          NodeId t1 = kids[0];
          NodeId t2 = kids[1];
          const bool w_under_0 = desc[kids[0]].test(w);
          const bool w_under_1 = desc[kids[1]].test(w);
          if (deg[t2] > deg[t1] || (deg[t1] == deg[t2] && w_under_1 && !w_under_0) ||
              (deg[t1] == deg[t2] && w_under_0 == w_under_1 && t2 < t1)) {
            std::swap(t1, t2);
          }
          if (!desc[t1].test(w)) {
            continue;
          }
          terms.push_back(psi.product({get(GateKey::value(t2)), get(GateKey::pair(t1, w)),
                                       get(GateKey::pair(u, static_cast<NodeId>(t)))}));
        }
        put(GateKey::pair(u, w), gap, psi.sum(terms));
      }
    }
  }

  auto [circuit, remap] = psi.finish(get(GateKey::value(c.root())));
  for (auto& [key, entry] : state.gate_table) {
    if (entry.ref.node) {
      const auto mapped = remap[*entry.ref.node];
      entry.pruned = !mapped.has_value();
      entry.ref.node = mapped;
    }
  }
  return PsiResult{std::move(circuit), std::move(state)};
}

inline Circuit reduce_depth(const Circuit& c) { return reduce_depth_detailed(c).psi; }

} // namespace pcdt
