#pragma once

#include <cstdint>
#include <vector>

#include "polynomial.hpp"

namespace pcdt {

inline constexpr std::size_t max_hk2_k = 4;

/// Flat index of the grid variable x_{sigma,tau}, sigma, tau in [0, 2^k).
///
/// The flat layout pairs consecutive variables under products and
/// consecutive pairs under sums, alternating upwards. Bit p of sigma (the
/// product choices) lands on flat bit 2p and bit p of tau (the sum choices)
/// on flat bit 2p+1; the most significant bits belong to the choices made
/// nearest the root.
inline std::uint32_t hk2_flat_index(std::uint32_t sigma, std::uint32_t tau, std::size_t k) {
  std::uint32_t flat = 0;
  for (std::size_t p = 0; p < k; ++p) {
    flat |= ((sigma >> p) & 1u) << (2 * p);
    flat |= ((tau >> p) & 1u) << (2 * p + 1);
  }
  return flat;
}

inline std::pair<std::uint32_t, std::uint32_t> hk2_grid_index(std::uint32_t flat, std::size_t k) {
  std::uint32_t sigma = 0;
  std::uint32_t tau = 0;
  for (std::size_t p = 0; p < k; ++p) {
    sigma |= ((flat >> (2 * p)) & 1u) << p;
    tau |= ((flat >> (2 * p + 1)) & 1u) << p;
  }
  return {sigma, tau};
}

/// The hard polynomial H^(k,2) over n = 2^{2k} plain indicators, built with
/// the flat indexing: multiply consecutive pairs, sum consecutive pairs, and
/// repeat until one polynomial remains. Degree 2^k, 2^{2^k - 1} monomials,
/// all coefficients 1.
inline SparsePolynomial hk2_polynomial(std::size_t k) {
  if (k < 1 || k > max_hk2_k) {
    throw error(errc::k_too_large, "k must be in [1, " + std::to_string(max_hk2_k) + "], got " + std::to_string(k));
  }
  const std::size_t n = std::size_t{1} << (2 * k);
  std::vector<SparsePolynomial> layer;
  layer.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    layer.push_back(SparsePolynomial::indicator(n, Indicator{VarId{i}, false}));
  }
  for (std::size_t level = 1; level <= 2 * k; ++level) {
    std::vector<SparsePolynomial> next;
    next.reserve(layer.size() / 2);
    for (std::size_t q = 0; q + 1 < layer.size(); q += 2) {
      next.push_back(level % 2 == 1 ? layer[q].multiply(layer[q + 1], default_budget_fallback)
                                    : layer[q] + layer[q + 1]);
    }
    layer = std::move(next);
  }
  return std::move(layer.front());
}

} // namespace pcdt
