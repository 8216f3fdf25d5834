#pragma once

#include <algorithm>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "../analysis.hpp"
#include "../circuit.hpp"

namespace pcdt {

using NodeSet = boost::dynamic_bitset<std::uint64_t>;

/// G_m: product nodes t with m < deg(t) whose two children both have
/// degree at most m.
struct GmSet {
  std::size_t m = 0;
  std::vector<NodeId> members;  // ascending NodeId

  bool contains(NodeId t) const { return std::binary_search(members.begin(), members.end(), t); }
};

inline std::size_t max_fanout(const Circuit& c) {
  std::size_t f = 0;
  for (const Node& n : c.nodes()) {
    f = std::max(f, n.children.size());
  }
  return f;
}

inline bool in_gm(const Node& n, NodeId id, std::size_t m, const std::vector<std::size_t>& deg) {
  return n.is_product() && n.children.size() == 2 && deg[id] > m && deg[n.children[0]] <= m &&
         deg[n.children[1]] <= m;
}

inline GmSet build_gm(const Circuit& c, std::size_t m) {
  if (m < 1) {
    throw error(errc::invalid_input, "m must be at least 1");
  }
  if (max_fanout(c) > 2) {
    throw error(errc::not_binary, "build_gm expects a binary circuit");
  }
  if (!check_validity(c).homogeneous) {
    throw error(errc::not_homogeneous, "build_gm expects a homogeneous circuit");
  }
  const auto deg = structural_degrees(c);
  GmSet g{m, {}};
  for (NodeId id = 0; id < c.size(); ++id) {
    if (in_gm(c.node(id), id, m, deg)) {
      g.members.push_back(id);
    }
  }
  return g;
}

/// Reflexive descendant sets: bit t of result[v] is set iff t is v or lies
/// below v.
inline std::vector<NodeSet> descendant_sets(const Circuit& c) {
  std::vector<NodeSet> desc(c.size(), NodeSet(c.size()));
  for (NodeId id : c.topological_order()) {
    desc[id].set(id);
    for (NodeId ch : c.node(id).children) {
      desc[id] |= desc[ch];
    }
  }
  return desc;
}

} // namespace pcdt
