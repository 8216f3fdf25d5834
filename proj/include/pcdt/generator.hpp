#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "circuit.hpp"

namespace pcdt {

struct GenParams {
  std::size_t n = 4;
  std::uint64_t seed = 0;
  double reuse_prob = 0.0;     // chance of reusing an existing sub-circuit with the same scope
  std::size_t max_fanout = 3;  // upper bound for sum and product fan-out
};

/// Random decomposable, smooth, monotone DAG over all `n` variables.
///
/// Sum nodes mix 2..max_fanout products over the same scope with positive
/// weights; each product splits its scope into near-equal random parts.
/// A single-variable scope becomes a leaf or a weighted sum of x and ~x.
/// Sub-circuits are cached by scope and reused with probability
/// `reuse_prob`, which is what produces multi-parent nodes. Deterministic
/// given the seed.
inline Circuit random_valid_pc(const GenParams& p) {
  if (p.n < 2) {
    throw error(errc::invalid_input, "random_valid_pc needs n >= 2");
  }
  if (p.max_fanout < 2) {
    throw error(errc::invalid_input, "max_fanout must be at least 2");
  }
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  CircuitBuilder b(p.n);
  std::map<std::vector<std::uint32_t>, std::vector<NodeId>> by_scope;

  auto fresh = [&](auto& self_gen, const std::vector<std::uint32_t>& vars) -> NodeId {
    if (vars.size() == 1) {
      const std::uint32_t v = vars.front();
      const double r = unit(rng);
      if (r < 0.25) {
        return b.leaf(v, false);
      }
      if (r < 0.5) {
        return b.leaf(v, true);
      }
      const NodeId x = b.leaf(v, false);
      const NodeId nx = b.leaf(v, true);
      return b.sum({x, nx}, {weight(rng), weight(rng)});
    }
    const std::size_t fan = pick(2, p.max_fanout);
    std::vector<NodeId> products;
    std::vector<double> weights;
    for (std::size_t i = 0; i < fan; ++i) {
      std::vector<std::uint32_t> shuffled = vars;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const std::size_t parts = pick(2, std::min(p.max_fanout, vars.size()));
      std::vector<NodeId> factors;
      std::size_t start = 0;
      for (std::size_t part = 0; part < parts; ++part) {
        const std::size_t len = (vars.size() - start) / (parts - part);
        std::vector<std::uint32_t> sub(shuffled.begin() + static_cast<std::ptrdiff_t>(start),
                                       shuffled.begin() + static_cast<std::ptrdiff_t>(start + len));
        std::sort(sub.begin(), sub.end());
        factors.push_back(self_gen(self_gen, sub));
        start += len;
      }
      products.push_back(b.product(std::move(factors)));
      weights.push_back(weight(rng));
    }
    return b.sum(std::move(products), std::move(weights));
  };

  auto gen = [&](auto& self, const std::vector<std::uint32_t>& vars) -> NodeId {
    auto& pool = by_scope[vars];
    if (!pool.empty() && unit(rng) < p.reuse_prob) {
      return pool[pick(0, pool.size() - 1)];
    }
    const NodeId id = fresh(self, vars);
    by_scope[vars].push_back(id);
    return id;
  };

  std::vector<std::uint32_t> all(p.n);
  std::iota(all.begin(), all.end(), 0u);
  const NodeId root = gen(gen, all);
  return b.build(root);
}

/// Random deep DAG: a caterpillar whose depth grows linearly in `n`.
///
/// Level i keeps `width` sum nodes over the prefix scope {0..i}; each mixes
/// two products of level-(i-1) nodes with fresh gadgets for variable i, so
/// each level node has two parents on average and plain duplication grows
/// exponentially. The root mixes every node of the last level.
inline Circuit random_chain_pc(std::size_t n, std::uint64_t seed, std::size_t width = 2) {
  if (n < 2) {
    throw error(errc::invalid_input, "random_chain_pc needs n >= 2");
  }
  if (width < 1) {
    throw error(errc::invalid_input, "width must be at least 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  CircuitBuilder b(n);
  auto gadget = [&](std::uint32_t v) {
    return b.sum({b.leaf(v, false), b.leaf(v, true)}, {weight(rng), weight(rng)});
  };
  std::vector<NodeId> level;
  for (std::size_t j = 0; j < width; ++j) {
    level.push_back(gadget(0));
  }
  for (std::uint32_t v = 1; v + 1 < n; ++v) {
    std::vector<NodeId> next;
    for (std::size_t j = 0; j < width; ++j) {
      // Child j always takes level[j], so no node is left without a parent.
      const std::size_t other = width == 1 ? 0 : (j + 1 + std::uniform_int_distribution<std::size_t>(0, width - 2)(rng)) % width;
      const NodeId a = b.product({level[j], gadget(v)});
      const NodeId c = b.product({level[other], gadget(v)});
      next.push_back(b.sum({a, c}, {weight(rng), weight(rng)}));
    }
    level = std::move(next);
  }
  std::vector<NodeId> top;
  std::vector<double> top_weights;
  for (NodeId prev : level) {
    top.push_back(b.product({prev, gadget(static_cast<std::uint32_t>(n - 1))}));
    top_weights.push_back(weight(rng));
  }
  if (top.size() == 1) {
    top.push_back(b.product({level.front(), gadget(static_cast<std::uint32_t>(n - 1))}));
    top_weights.push_back(weight(rng));
  }
  b.sum(std::move(top), std::move(top_weights));
  return b.build();
}

} // namespace pcdt
