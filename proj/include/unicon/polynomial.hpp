#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "unicon/errors.hpp"
#include "unicon/jet.hpp"

namespace unicon {

struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;
};

/// Multivariate polynomial in canonical form: exponent tuples unique, sorted,
/// no zero coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}
  Polynomial(int n, std::vector<Monomial> terms) : n_(n), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      if (static_cast<int>(t.exponents.size()) != n_) {
        throw DimensionMismatch("monomial has " + std::to_string(t.exponents.size()) + " exponents, expected " +
                                std::to_string(n_));
      }
      for (int e : t.exponents)
        if (e < 0) throw BadParams("negative exponent in polynomial");
    }
    canonicalize();
  }

  static Polynomial constant(int n, double c) {
    return Polynomial(n, {Monomial{c, std::vector<int>(static_cast<std::size_t>(n), 0)}});
  }
  static Polynomial coordinate(int n, int i, double coeff = 1.0) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    return Polynomial(n, {Monomial{coeff, std::move(e)}});
  }

  int dim() const { return n_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& t : terms_) {
      int s = 0;
      for (int e : t.exponents) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  Polynomial derivative(int i) const {
    std::vector<Monomial> out;
    for (const auto& t : terms_) {
      const int e = t.exponents[static_cast<std::size_t>(i)];
      if (e == 0) continue;
      Monomial m = t;
      m.coeff *= e;
      m.exponents[static_cast<std::size_t>(i)] -= 1;
      out.push_back(std::move(m));
    }
    return Polynomial(n_, std::move(out));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    const int n = a.is_zero() ? b.n_ : a.n_;
    std::vector<Monomial> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return Polynomial(n, std::move(t));
  }
  friend Polynomial operator*(double s, Polynomial p) {
    for (auto& t : p.terms_) t.coeff *= s;
    p.canonicalize();
    return p;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<Monomial> out;
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) {
        Monomial m{x.coeff * y.coeff, x.exponents};
        for (std::size_t k = 0; k < m.exponents.size(); ++k) m.exponents[k] += y.exponents[k];
        out.push_back(std::move(m));
      }
    return Polynomial(a.n_, std::move(out));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
      if (a.terms_[k].coeff != b.terms_[k].coeff || a.terms_[k].exponents != b.terms_[k].exponents) return false;
    return true;
  }

  /// Evaluates at coordinates of any jet type; derivatives come out exact.
  template <Scalar S>
  S evaluate(std::span<const S> x) const {
    S acc{};
    if (terms_.empty()) return acc;
    std::vector<std::vector<S>> powers(x.size());
    const int max_e = degree();
    for (std::size_t i = 0; i < x.size(); ++i) {
      powers[i].reserve(static_cast<std::size_t>(max_e) + 1);
      powers[i].push_back(S(1.0));
      for (int e = 1; e <= max_e; ++e) powers[i].push_back(powers[i].back() * x[i]);
    }
    for (const auto& t : terms_) {
      S m(t.coeff);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const int e = t.exponents[i];
        if (e > 0) m = m * powers[i][static_cast<std::size_t>(e)];
      }
      acc += m;
    }
    return acc;
  }

 private:
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
    std::vector<Monomial> merged;
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().exponents == t.exponents) {
        merged.back().coeff += t.coeff;
      } else {
        merged.push_back(std::move(t));
      }
    }
    std::erase_if(merged, [](const Monomial& m) { return m.coeff == 0.0; });
    terms_ = std::move(merged);
  }

  int n_ = 0;
  std::vector<Monomial> terms_;
};

/// Every monomial of total degree ≤ max_degree with a coefficient drawn
/// uniformly from [−1, 1].
inline Polynomial random_polynomial(int n, int max_degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<Monomial> terms;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  // Odometer over exponent tuples with total degree ≤ max_degree.
  while (true) {
    terms.push_back(Monomial{coeff(rng), e});
    int k = 0;
    for (; k < n; ++k) {
      ++e[static_cast<std::size_t>(k)];
      int total = 0;
      for (int x : e) total += x;
      if (total <= max_degree) break;
      e[static_cast<std::size_t>(k)] = 0;
    }
    if (k == n) break;
  }
  return Polynomial(n, std::move(terms));
}

/// Upper bound of |p| over the box [−h, h]^n.
inline double sup_norm_bound(const Polynomial& p, double half_width) {
  double b = 0.0;
  for (const auto& t : p.terms()) {
    int deg = 0;
    for (int e : t.exponents) deg += e;
    b += std::abs(t.coeff) * std::pow(half_width, deg);
  }
  return b;
}

}  // namespace unicon
