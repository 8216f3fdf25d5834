#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "analysis.hpp"
#include "circuit.hpp"
#include "polynomial.hpp"

namespace pcdt {

namespace detail {

inline SparsePolynomial combine_children(std::size_t num_vars, const Node& n,
                                         const std::function<const SparsePolynomial&(NodeId)>& child,
                                         std::size_t budget) {
  if (n.is_sum()) {
    SparsePolynomial acc(num_vars);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      acc.add_scaled(child(n.children[i]), n.weights[i]);
      if (acc.size() > budget) {
        throw error(errc::term_budget_exceeded, "sum exceeds " + std::to_string(budget) + " terms");
      }
    }
    return acc;
  }
  SparsePolynomial acc = SparsePolynomial::constant(num_vars, 1.0);
  for (NodeId ch : n.children) {
    acc = acc.multiply(child(ch), budget);
  }
  return acc;
}

/// Nodes of the sub-circuit rooted at `v`, in topological order.
inline std::vector<NodeId> cone_order(const Circuit& c, NodeId v) {
  std::vector<bool> in(c.size(), false);
  in[v] = true;
  const auto order = c.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (in[*it]) {
      for (NodeId ch : c.node(*it).children) {
        in[ch] = true;
      }
    }
  }
  std::vector<NodeId> cone;
  for (NodeId id : order) {
    if (in[id]) {
      cone.push_back(id);
    }
  }
  return cone;
}

/// Coefficient of y in a polynomial that is at most linear in slot `y`.
inline SparsePolynomial y_coefficient(const SparsePolynomial& p, std::uint32_t y) {
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    const std::size_t e = t.monomial.exponent(y);
    if (e == 0) {
      continue;
    }
    if (e > 1) {
      throw error(errc::invalid_input, "substituted node occurs non-linearly; circuit is not decomposable");
    }
    Monomial m = t.monomial;
    m.remove_one(y);
    out.push_back({std::move(m), t.coeff});
  }
  return SparsePolynomial::from_terms(p.num_vars(), std::move(out));
}

} // namespace detail

/// Exact polynomial of every node, indexed by NodeId.
inline std::vector<SparsePolynomial> node_polynomials(const Circuit& c, std::size_t budget = default_term_budget()) {
  std::vector<SparsePolynomial> poly(c.size(), SparsePolynomial(c.num_vars()));
  const std::function<const SparsePolynomial&(NodeId)> get = [&](NodeId id) -> const SparsePolynomial& { return poly[id]; };
  for (NodeId id : c.topological_order()) {
    const Node& n = c.node(id);
    poly[id] = n.is_leaf() ? SparsePolynomial::indicator(c.num_vars(), n.indicator)
                           : detail::combine_children(c.num_vars(), n, get, budget);
  }
  return poly;
}

/// Exact polynomial computed by node `v`; intermediate polynomials are
/// released once all of their parents inside the cone are done.
inline SparsePolynomial extract_polynomial_at(const Circuit& c, NodeId v, std::size_t budget = default_term_budget()) {
  const auto cone = detail::cone_order(c, v);
  std::vector<std::uint32_t> pending(c.size(), 0);
  for (NodeId id : cone) {
    for (NodeId ch : c.node(id).children) {
      ++pending[ch];
    }
  }
  std::vector<std::optional<SparsePolynomial>> poly(c.size());
  const std::function<const SparsePolynomial&(NodeId)> get = [&](NodeId id) -> const SparsePolynomial& { return *poly[id]; };
  for (NodeId id : cone) {
    const Node& n = c.node(id);
    poly[id] = n.is_leaf() ? SparsePolynomial::indicator(c.num_vars(), n.indicator)
                           : detail::combine_children(c.num_vars(), n, get, budget);
    for (NodeId ch : n.children) {
      if (--pending[ch] == 0) {
        poly[ch].reset();
      }
    }
  }
  return std::move(*poly[v]);
}

/// The network polynomial, by symbolic bottom-up expansion.
inline SparsePolynomial extract_polynomial(const Circuit& c, std::size_t budget = default_term_budget()) {
  return extract_polynomial_at(c, c.root(), budget);
}

/// ∂_w f_v by substitution: f_w is replaced by a fresh atom y, the cone of
/// `v` is expanded, and the y-linear result is differentiated in y.
/// Zero when `w` is not a descendant of `v`.
inline SparsePolynomial partial_derivative_oracle(const Circuit& c, NodeId v, NodeId w,
                                                  std::size_t budget = default_term_budget()) {
  if (v >= c.size() || w >= c.size()) {
    throw error(errc::invalid_input, "node id out of range");
  }
  const auto y = static_cast<std::uint32_t>(2 * c.num_vars());
  const auto cone = detail::cone_order(c, v);
  std::vector<std::optional<SparsePolynomial>> bar(c.size());
  const std::function<const SparsePolynomial&(NodeId)> get = [&](NodeId id) -> const SparsePolynomial& { return *bar[id]; };
  for (NodeId id : cone) {
    const Node& n = c.node(id);
    if (id == w) {
      bar[id] = SparsePolynomial::from_terms(c.num_vars(), {Term{Monomial{y}, 1.0}});
    } else if (n.is_leaf()) {
      bar[id] = SparsePolynomial::indicator(c.num_vars(), n.indicator);
    } else {
      bar[id] = detail::combine_children(c.num_vars(), n, get, budget);
    }
  }
  return detail::y_coefficient(*bar[v], y);
}

/// ∂_w f_x for every node x, by the same substitution, reusing the plain
/// node polynomials for everything that is not an ancestor of `w`.
inline std::vector<SparsePolynomial> partial_derivatives_wrt(const Circuit& c, NodeId w,
                                                             std::span<const SparsePolynomial> node_polys,
                                                             std::size_t budget = default_term_budget()) {
  const auto y = static_cast<std::uint32_t>(2 * c.num_vars());
  std::vector<bool> above(c.size(), false);
  above[w] = true;
  for (NodeId id : c.topological_order()) {
    for (NodeId ch : c.node(id).children) {
      if (above[ch]) {
        above[id] = true;
      }
    }
  }
  std::vector<SparsePolynomial> bar(c.size(), SparsePolynomial(c.num_vars()));
  const std::function<const SparsePolynomial&(NodeId)> get = [&](NodeId id) -> const SparsePolynomial& {
    return above[id] ? bar[id] : node_polys[id];
  };
  std::vector<SparsePolynomial> deriv(c.size(), SparsePolynomial(c.num_vars()));
  for (NodeId id : c.topological_order()) {
    if (!above[id]) {
      continue;
    }
    if (id == w) {
      bar[id] = SparsePolynomial::from_terms(c.num_vars(), {Term{Monomial{y}, 1.0}});
    } else {
      bar[id] = detail::combine_children(c.num_vars(), c.node(id), get, budget);
    }
    deriv[id] = detail::y_coefficient(bar[id], y);
  }
  return deriv;
}

/// Randomized identity test: both circuits are evaluated at `trials` points
/// with every slot drawn uniformly from {0, ..., 2n+1}. A false result is
/// definitive; a true result holds with high probability.
inline bool random_equivalence(const Circuit& a, const Circuit& b, std::size_t trials, std::uint64_t seed,
                               double tol = 1e-9) {
  if (a.num_vars() != b.num_vars()) {
    throw error(errc::var_count_mismatch,
                std::to_string(a.num_vars()) + " vs " + std::to_string(b.num_vars()) + " variables");
  }
  const std::size_t n = a.num_vars();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> draw(0, static_cast<int>(2 * n + 1));
  std::vector<double> slots(2 * n);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (auto& s : slots) {
      s = draw(rng);
    }
    const Assignment point(slots);
    if (!approx_equal(evaluate(a, point), evaluate(b, point), tol)) {
      return false;
    }
  }
  return true;
}

} // namespace pcdt
