#pragma once

// Small dense tensors over a runtime dimension n (2..kMaxDim), stored
// row-major. Index meaning is fixed by the producer, e.g. gamma(k, i, j) is
// Γ^k_{ij} and r(l, i, j, k) is R^l_{ijk}.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "unicon/jet.hpp"

namespace unicon {

template <typename S, std::size_t Rank>
class Tensor {
 public:
  using value_type = S;
  static constexpr std::size_t rank = Rank;

  Tensor() = default;
  explicit Tensor(int n) : n_(n), data_(extent(n), S{}) {}

  int dim() const { return n_; }
  std::size_t size() const { return data_.size(); }

  template <typename... I>
  S& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(idx...)];
  }
  template <typename... I>
  const S& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(idx...)];
  }

  std::vector<S>& flat() { return data_; }
  const std::vector<S>& flat() const { return data_; }

  Tensor& operator+=(const Tensor& o) {
    assert(o.n_ == n_);
    for (std::size_t a = 0; a < data_.size(); ++a) data_[a] += o.data_[a];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    assert(o.n_ == n_);
    for (std::size_t a = 0; a < data_.size(); ++a) data_[a] -= o.data_[a];
    return *this;
  }
  Tensor& operator*=(double s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }

 private:
  static std::size_t extent(int n) {
    std::size_t e = 1;
    for (std::size_t r = 0; r < Rank; ++r) e *= static_cast<std::size_t>(n);
    return e;
  }
  template <typename... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((assert(idx >= 0 && idx < n_), off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int n_ = 0;
  std::vector<S> data_;
};

template <typename S>
using Vec = Tensor<S, 1>;
template <typename S>
using Mat = Tensor<S, 2>;

template <typename S, std::size_t R, typename F>
auto map(const Tensor<S, R>& t, F&& f) {
  using U = std::decay_t<decltype(f(std::declval<const S&>()))>;
  Tensor<U, R> out(t.dim());
  for (std::size_t a = 0; a < t.size(); ++a) out.flat()[a] = f(t.flat()[a]);
  return out;
}

/// Drops the outermost derivative level of every entry.
template <typename T, std::size_t R>
Tensor<T, R> truncate(const Tensor<Jet<T>, R>& t) {
  return map(t, [](const Jet<T>& x) { return x.v; });
}

/// ∂_i of every entry, one derivative level lower.
template <typename T, std::size_t R>
Tensor<T, R> partial(const Tensor<Jet<T>, R>& t, int i) {
  return map(t, [i](const Jet<T>& x) { return x.d[static_cast<std::size_t>(i)]; });
}

template <typename S, std::size_t R>
Tensor<double, R> values(const Tensor<S, R>& t) {
  return map(t, [](const S& x) { return primal(x); });
}

template <std::size_t R>
double max_abs(const Tensor<double, R>& t) {
  double m = 0.0;
  for (double x : t.flat()) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t R>
double max_abs_diff(const Tensor<double, R>& a, const Tensor<double, R>& b) {
  assert(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
  return m;
}

/// max|a − b| / max(1, max|a|, max|b|).
template <std::size_t R>
double normalized_residual(const Tensor<double, R>& a, const Tensor<double, R>& b) {
  const double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return max_abs_diff(a, b) / scale;
}

template <typename S>
Mat<S> identity(int n) {
  Mat<S> m(n);
  for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
  return m;
}

/// Plain matrix product (A B)(i, j) = Σ_m A(i, m) B(m, j).
template <typename S>
Mat<S> matmul(const Mat<S>& a, const Mat<S>& b) {
  const int n = a.dim();
  Mat<S> c(n);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j) c(i, j) += a(i, m) * b(m, j);
  return c;
}

template <typename S>
Mat<S> transpose(const Mat<S>& a) {
  const int n = a.dim();
  Mat<S> t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = a(j, i);
  return t;
}

}  // namespace unicon
