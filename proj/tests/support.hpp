#pragma once

// Test-side oracles. Nothing here uses the library's symbolic expansion:
// polynomials are recovered from evaluations alone.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "pcdt/pcdt.hpp"

#define REQUIRE_ERRC(expr, expected)                      \
  do {                                                    \
    bool thrown_ = false;                                 \
    try {                                                 \
      (void)(expr);                                       \
    } catch (const ::pcdt::error& e_) {                   \
      thrown_ = true;                                     \
      CHECK(e_.code() == (expected));                     \
    }                                                     \
    CHECK(thrown_);                                       \
  } while (false)

namespace pcdt::testing {

/// Coefficients keyed by the bitmask of indicator slots (bit s = slot s).
using MaskPolynomial = std::map<std::uint64_t, double>;

/// Recovers the multilinear polynomial of a circuit by evaluating it on
/// every 0/1 point of the 2n slots and applying the Moebius transform.
/// Exact for multilinear polynomials; needs 2n <= 20.
inline MaskPolynomial interpolate(const Circuit& c) {
  const std::size_t slots = 2 * c.num_vars();
  const std::size_t points = std::size_t{1} << slots;
  std::vector<double> f(points);
  std::vector<double> a(slots);
  for (std::size_t mask = 0; mask < points; ++mask) {
    for (std::size_t s = 0; s < slots; ++s) {
      a[s] = (mask >> s) & 1u ? 1.0 : 0.0;
    }
    f[mask] = evaluate(c, Assignment(a));
  }
  for (std::size_t s = 0; s < slots; ++s) {
    for (std::size_t mask = 0; mask < points; ++mask) {
      if ((mask >> s) & 1u) {
        f[mask] -= f[mask ^ (std::size_t{1} << s)];
      }
    }
  }
  MaskPolynomial out;
  for (std::size_t mask = 0; mask < points; ++mask) {
    if (std::abs(f[mask]) > 1e-12) {
      out[mask] = f[mask];
    }
  }
  return out;
}

inline MaskPolynomial to_mask(const SparsePolynomial& p) {
  MaskPolynomial out;
  for (const Term& t : p.terms()) {
    std::uint64_t mask = 0;
    for (auto s : t.monomial.slots()) {
      mask |= std::uint64_t{1} << s;
    }
    out[mask] += t.coeff;
  }
  return out;
}

inline bool mask_equal(const MaskPolynomial& a, const MaskPolynomial& b, double tol = 1e-9) {
  auto close = [tol](double x, double y) { return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)}); };
  for (const auto& [m, c] : a) {
    auto it = b.find(m);
    if (!close(c, it == b.end() ? 0.0 : it->second)) {
      return false;
    }
  }
  for (const auto& [m, c] : b) {
    if (!a.contains(m) && !close(c, 0.0)) {
      return false;
    }
  }
  return true;
}

/// Sampled corpus of balanced random circuits; parameters vary with the seed.
inline Circuit corpus_circuit(std::size_t n, std::uint64_t seed) {
  GenParams p;
  p.n = n;
  p.seed = seed;
  p.reuse_prob = 0.2 * static_cast<double>(seed % 5);
  p.max_fanout = 2 + seed % 2;
  return random_valid_pc(p);
}

/// Two leaves under a product: the smallest degree-2 circuit.
inline Circuit product_of_leaves() {
  CircuitBuilder b(2);
  const NodeId x0 = b.leaf(0, false);
  const NodeId x1 = b.leaf(1, false);
  b.product({x0, x1});
  return b.build();
}

} // namespace pcdt::testing
