#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "analysis.hpp"
#include "circuit.hpp"

namespace pcdt {

/// A monomial over indicator slots (x_i at 2i, ~x_i at 2i+1).
///
/// Stored as the sorted multiset of slots, so x0*~x1 is {0, 3} and x0^2 is
/// {0, 0}. Monomials of decomposable circuits never repeat a slot.
class Monomial {
public:
  Monomial() = default;
  explicit Monomial(std::vector<std::uint32_t> slots) : slots_(std::move(slots)) {
    std::sort(slots_.begin(), slots_.end());
  }
  Monomial(std::initializer_list<std::uint32_t> slots) : Monomial(std::vector<std::uint32_t>(slots)) {}

  static Monomial of(Indicator ind) { return Monomial({static_cast<std::uint32_t>(ind.slot())}); }

  std::size_t degree() const noexcept { return slots_.size(); }
  std::span<const std::uint32_t> slots() const noexcept { return slots_; }
  bool empty() const noexcept { return slots_.empty(); }

  std::size_t exponent(std::uint32_t slot) const {
    auto [lo, hi] = std::equal_range(slots_.begin(), slots_.end(), slot);
    return static_cast<std::size_t>(hi - lo);
  }
  bool is_multilinear() const noexcept { return std::adjacent_find(slots_.begin(), slots_.end()) == slots_.end(); }
  /// True when some variable occurs both plain and negated.
  bool has_complementary_pair() const noexcept {
    for (std::size_t i = 1; i < slots_.size(); ++i) {
      if (slots_[i] == slots_[i - 1] + 1 && slots_[i] % 2 == 1) {
        return true;
      }
    }
    return false;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.slots_.resize(a.slots_.size() + b.slots_.size());
    std::merge(a.slots_.begin(), a.slots_.end(), b.slots_.begin(), b.slots_.end(), out.slots_.begin());
    return out;
  }

  /// Removes one occurrence of `slot`; returns false when absent.
  bool remove_one(std::uint32_t slot) {
    auto it = std::lower_bound(slots_.begin(), slots_.end(), slot);
    if (it == slots_.end() || *it != slot) {
      return false;
    }
    slots_.erase(it);
    return true;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.slots_ <=> b.slots_; }

  std::size_t hash() const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto s : slots_) {
      h = (h ^ s) * 1099511628211ull;
    }
    return h;
  }

private:
  std::vector<std::uint32_t> slots_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

struct Term {
  Monomial monomial;
  double coeff = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

inline constexpr std::size_t default_budget_fallback = 1'000'000;

/// Term-count budget for exact expansion; `PC_TERM_BUDGET` overrides the
/// default of 10^6 monomials.
inline std::size_t default_term_budget() {
  if (const char* env = std::getenv("PC_TERM_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      return static_cast<std::size_t>(v);
    }
  }
  return default_budget_fallback;
}

/// Canonical sparse polynomial: terms sorted by monomial, each monomial once,
/// no zero coefficients.
class SparsePolynomial {
public:
  explicit SparsePolynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  static SparsePolynomial constant(std::size_t num_vars, double c) {
    SparsePolynomial p(num_vars);
    if (c != 0.0) {
      p.terms_.push_back({Monomial{}, c});
    }
    return p;
  }
  static SparsePolynomial indicator(std::size_t num_vars, Indicator ind, double c = 1.0) {
    SparsePolynomial p(num_vars);
    if (c != 0.0) {
      p.terms_.push_back({Monomial::of(ind), c});
    }
    return p;
  }
  /// Canonicalizes arbitrary terms: merges duplicates and drops zeros.
  static SparsePolynomial from_terms(std::size_t num_vars, std::vector<Term> terms) {
    SparsePolynomial p(num_vars);
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::span<const Term> terms() const noexcept { return terms_; }

  double coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.monomial < key; });
    return (it != terms_.end() && it->monomial == m) ? it->coeff : 0.0;
  }

  /// Highest monomial degree; 0 for constants and for the zero polynomial.
  std::size_t degree() const noexcept {
    std::size_t d = 0;
    for (const auto& t : terms_) {
      d = std::max(d, t.monomial.degree());
    }
    return d;
  }
  bool is_homogeneous() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const Term& t) { return t.monomial.degree() == terms_.front().monomial.degree(); });
  }
  bool is_multilinear() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.monomial.is_multilinear(); });
  }
  /// Variables occurring in any monomial, plain or negated.
  VarSet variables() const {
    VarSet vars(num_vars_);
    for (const auto& t : terms_) {
      for (auto s : t.monomial.slots()) {
        if (s / 2 < num_vars_) {
          vars.set(s / 2);
        }
      }
    }
    return vars;
  }

  double evaluate(const Assignment& a) const {
    if (a.size() != 2 * num_vars_) {
      throw error(errc::assignment_length_mismatch, "assignment length does not match polynomial");
    }
    double total = 0.0;
    for (const auto& t : terms_) {
      double v = t.coeff;
      for (auto s : t.monomial.slots()) {
        v *= a[s];
      }
      total += v;
    }
    return total;
  }

  SparsePolynomial scaled(double c) const {
    if (c == 0.0) {
      return SparsePolynomial(num_vars_);
    }
    SparsePolynomial out = *this;
    for (auto& t : out.terms_) {
      t.coeff *= c;
    }
    out.drop_zeros();
    return out;
  }

  SparsePolynomial& add_scaled(const SparsePolynomial& q, double c = 1.0) {
    if (c == 0.0 || q.is_zero()) {
      return *this;
    }
    std::vector<Term> merged;
    merged.reserve(terms_.size() + q.terms_.size());
    auto a = terms_.begin();
    auto b = q.terms_.begin();
    while (a != terms_.end() || b != q.terms_.end()) {
      if (b == q.terms_.end() || (a != terms_.end() && a->monomial < b->monomial)) {
        merged.push_back(std::move(*a++));
      } else if (a == terms_.end() || b->monomial < a->monomial) {
        merged.push_back({b->monomial, c * b->coeff});
        ++b;
      } else {
        const double v = a->coeff + c * b->coeff;
        if (v != 0.0) {
          merged.push_back({std::move(a->monomial), v});
        }
        ++a;
        ++b;
      }
    }
    terms_ = std::move(merged);
    drop_zeros();
    return *this;
  }

  /// Product with a term budget. Throws TermBudgetExceeded when the
  /// canonical result would hold more than `budget` monomials.
  SparsePolynomial multiply(const SparsePolynomial& q, std::size_t budget) const {
    SparsePolynomial out(std::max(num_vars_, q.num_vars_));
    if (is_zero() || q.is_zero()) {
      return out;
    }
    const std::size_t pairs = terms_.size() * q.terms_.size();
    if (pairs <= std::max<std::size_t>(budget, 1) * 4) {
      out.terms_.reserve(pairs);
      for (const auto& s : terms_) {
        for (const auto& t : q.terms_) {
          out.terms_.push_back({s.monomial * t.monomial, s.coeff * t.coeff});
        }
      }
      out.canonicalize();
    } else {
      std::unordered_map<Monomial, double, MonomialHash> acc;
      for (const auto& s : terms_) {
        for (const auto& t : q.terms_) {
          acc[s.monomial * t.monomial] += s.coeff * t.coeff;
          if (acc.size() > budget) {
            throw error(errc::term_budget_exceeded, "product exceeds " + std::to_string(budget) + " terms");
          }
        }
      }
      out.terms_.reserve(acc.size());
      for (auto& [m, c] : acc) {
        out.terms_.push_back({m, c});
      }
      out.canonicalize();
    }
    if (out.terms_.size() > budget) {
      throw error(errc::term_budget_exceeded, "product exceeds " + std::to_string(budget) + " terms");
    }
    return out;
  }

  friend SparsePolynomial operator+(SparsePolynomial p, const SparsePolynomial& q) { return std::move(p.add_scaled(q)); }
  friend SparsePolynomial operator*(const SparsePolynomial& p, const SparsePolynomial& q) {
    return p.multiply(q, default_term_budget());
  }

  friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

private:
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().monomial == t.monomial) {
        out.back().coeff += t.coeff;
      } else {
        out.push_back(std::move(t));
      }
    }
    terms_ = std::move(out);
    drop_zeros();
  }
  void drop_zeros() {
    std::erase_if(terms_, [](const Term& t) { return t.coeff == 0.0; });
  }

  std::size_t num_vars_;
  std::vector<Term> terms_;
};

/// True iff both polynomials have the same monomials and every coefficient
/// agrees within relative tolerance `tol` (tol = 0 demands equality).
inline bool poly_equal(const SparsePolynomial& p, const SparsePolynomial& q, double tol = 1e-9) {
  if (p.num_vars() != q.num_vars()) {
    throw error(errc::var_count_mismatch,
                std::to_string(p.num_vars()) + " vs " + std::to_string(q.num_vars()) + " variables");
  }
  if (p.size() != q.size()) {
    return false;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Term& a = p.terms()[i];
    const Term& b = q.terms()[i];
    if (a.monomial != b.monomial || !approx_equal(a.coeff, b.coeff, tol)) {
      return false;
    }
  }
  return true;
}

inline std::string slot_name(std::uint32_t slot) {
  return (slot % 2 == 1 ? "~x" : "x") + std::to_string(slot / 2);
}

inline std::string format_coefficient(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", c);
  return buf;
}

/// One term per line, `coeff * x3 * ~x7`, in canonical monomial order.
inline std::string to_text(const SparsePolynomial& p) {
  if (p.is_zero()) {
    return "0\n";
  }
  std::ostringstream os;
  for (const auto& t : p.terms()) {
    os << format_coefficient(t.coeff);
    const auto slots = t.monomial.slots();
    for (std::size_t i = 0; i < slots.size();) {
      std::size_t j = i;
      while (j < slots.size() && slots[j] == slots[i]) {
        ++j;
      }
      os << " * " << slot_name(slots[i]);
      if (j - i > 1) {
        os << '^' << (j - i);
      }
      i = j;
    }
    os << '\n';
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const SparsePolynomial& p) { return os << to_text(p); }

} // namespace pcdt
