#pragma once

// Forward-mode jets with nesting: Jet<double> carries first partials,
// Jet<Jet<double>> carries second partials, and so on. Directions are fixed
// at kMaxDim; a chart of dimension n < kMaxDim simply leaves the trailing
// directions at zero.

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

namespace unicon {

inline constexpr int kMaxDim = 4;

template <typename T>
struct Jet {
  T v{};
  std::array<T, kMaxDim> d{};

  constexpr Jet() = default;
  // Constants have vanishing partials.
  constexpr Jet(double c) : v(c) {}  // NOLINT(google-explicit-constructor)
  constexpr Jet(T value, std::array<T, kMaxDim> partials) : v(std::move(value)), d(std::move(partials)) {}

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] += o.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] -= o.d[i];
    return *this;
  }
  Jet& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    a *= -1.0;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v * b.v;
    for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.v * b.d[i] + a.d[i] * b.v;
    return r;
  }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) {
    a.v += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, double s) {
    a.v -= s;
    return a;
  }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
  friend Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

  friend Jet reciprocal(const Jet& a) {
    Jet r;
    r.v = 1.0 / a.v;
    const T minus_sq = -(r.v * r.v);
    for (int i = 0; i < kMaxDim; ++i) r.d[i] = minus_sq * a.d[i];
    return r;
  }
  friend Jet sin(const Jet& a) {
    using std::cos;
    using std::sin;
    Jet r;
    r.v = sin(a.v);
    const T c = cos(a.v);
    for (int i = 0; i < kMaxDim; ++i) r.d[i] = c * a.d[i];
    return r;
  }
  friend Jet cos(const Jet& a) {
    using std::cos;
    using std::sin;
    Jet r;
    r.v = cos(a.v);
    const T ms = -sin(a.v);
    for (int i = 0; i < kMaxDim; ++i) r.d[i] = ms * a.d[i];
    return r;
  }
};

inline double reciprocal(double x) { return 1.0 / x; }

template <int Order>
struct JetOfOrder {
  using type = Jet<typename JetOfOrder<Order - 1>::type>;
};
template <>
struct JetOfOrder<0> {
  using type = double;
};
template <int Order>
using JetN = typename JetOfOrder<Order>::type;

using Jet1 = JetN<1>;
using Jet2 = JetN<2>;
using Jet3 = JetN<3>;

template <typename S>
struct jet_traits;
template <>
struct jet_traits<double> {
  static constexpr int order = 0;
};
template <typename T>
struct jet_traits<Jet<T>> {
  static constexpr int order = jet_traits<T>::order + 1;
  using inner = T;
};

template <typename S>
concept Scalar = requires { jet_traits<S>::order; };

/// Value of the underlying function, dropping every derivative.
inline double primal(double x) { return x; }
template <typename T>
double primal(const Jet<T>& x) {
  return primal(x.v);
}

/// The coordinate function x^i seeded at `c`, at every nesting level.
template <Scalar S>
S variable(int i, double c) {
  if constexpr (std::same_as<S, double>) {
    return c;
  } else {
    using T = typename jet_traits<S>::inner;
    S r;
    r.v = variable<T>(i, c);
    r.d[static_cast<std::size_t>(i)] = T(1.0);
    return r;
  }
}

template <Scalar S>
std::vector<S> seed_point(std::span<const double> p) {
  std::vector<S> x;
  x.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) x.push_back(variable<S>(static_cast<int>(i), p[i]));
  return x;
}

/// Mixed partial ∂_{idx[0]} ∂_{idx[1]} ... of a jet, as a plain number.
inline double partial(double x, std::span<const int> idx) { return idx.empty() ? x : 0.0; }
template <typename T>
double partial(const Jet<T>& x, std::span<const int> idx) {
  if (idx.empty()) return primal(x);
  return partial(x.d[static_cast<std::size_t>(idx[0])], idx.subspan(1));
}

}  // namespace unicon
