#pragma once

// Coordinate charts, smooth fields with exact jets, and preset manifolds.
//
// Every field evaluates at a point to any jet type S (double, Jet1, Jet2,
// Jet3); derivatives are produced by jet arithmetic on polynomial or
// closed-form expressions, never by differencing.

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "unicon/errors.hpp"
#include "unicon/levi_civita.hpp"
#include "unicon/polynomial.hpp"
#include "unicon/tensor.hpp"

namespace unicon {

struct Chart {
  int dim = 0;
  std::vector<double> lower;
  std::vector<double> upper;

  static Chart box(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size()) throw DimensionMismatch("chart bounds have different lengths");
    const int n = static_cast<int>(lo.size());
    if (n < 2 || n > kMaxDim) {
      throw BadParams("chart dimension must be in [2, " + std::to_string(kMaxDim) + "], got " + std::to_string(n));
    }
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(hi[i] > lo[i])) throw BadParams("chart domain must have positive volume");
    return Chart{n, std::move(lo), std::move(hi)};
  }

  bool contains(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != dim) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double slack = 1e-12 * (upper[i] - lower[i]);
      if (!(p[i] >= lower[i] - slack && p[i] <= upper[i] + slack)) return false;
    }
    return true;
  }

  std::vector<std::vector<double>> sample(std::size_t count, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts(count, std::vector<double>(static_cast<std::size_t>(dim)));
    for (auto& p : pts)
      for (int i = 0; i < dim; ++i) {
        std::uniform_real_distribution<double> u(lower[static_cast<std::size_t>(i)], upper[static_cast<std::size_t>(i)]);
        p[static_cast<std::size_t>(i)] = u(rng);
      }
    return pts;
  }
};

using ScalarField = Polynomial;

struct OneFormField {
  std::vector<Polynomial> comps;

  static OneFormField zero(int n) { return {std::vector<Polynomial>(static_cast<std::size_t>(n), Polynomial(n))}; }
  int dim() const { return static_cast<int>(comps.size()); }
  bool is_zero() const {
    for (const auto& c : comps)
      if (!c.is_zero()) return false;
    return true;
  }

  template <Scalar S>
  Vec<S> evaluate(std::span<const S> x) const {
    Vec<S> out(dim());
    for (int i = 0; i < dim(); ++i) out(i) = comps[static_cast<std::size_t>(i)].evaluate(x);
    return out;
  }
};

struct EndoField;

/// comps[k * n + i] holds φ^k_i.
struct PolynomialEndo {
  std::vector<Polynomial> comps;
};
struct IdentityEndo {};
/// Ricci operator Q of the ambient metric.
struct RicciOperatorEndo {};
/// ½(φ + φ*) with φ* the g-adjoint, i.e. φ₁ of the base field.
struct SymmetricPartEndo {
  std::shared_ptr<const EndoField> base;
};
/// ½(φ − φ*), i.e. φ₂ of the base field.
struct SkewPartEndo {
  std::shared_ptr<const EndoField> base;
};

struct EndoField {
  int n = 0;
  std::variant<PolynomialEndo, IdentityEndo, RicciOperatorEndo, SymmetricPartEndo, SkewPartEndo> kind;

  static EndoField zero(int n) {
    return {n, PolynomialEndo{std::vector<Polynomial>(static_cast<std::size_t>(n * n), Polynomial(n))}};
  }
  static EndoField identity(int n) { return {n, IdentityEndo{}}; }
  static EndoField ricci_operator(int n) { return {n, RicciOperatorEndo{}}; }
  static EndoField symmetric_part(std::shared_ptr<const EndoField> base) {
    const int n = base->n;
    return {n, SymmetricPartEndo{std::move(base)}};
  }
  static EndoField skew_part(std::shared_ptr<const EndoField> base) {
    const int n = base->n;
    return {n, SkewPartEndo{std::move(base)}};
  }

  bool needs_curvature() const {
    if (std::holds_alternative<RicciOperatorEndo>(kind)) return true;
    if (const auto* s = std::get_if<SymmetricPartEndo>(&kind)) return s->base->needs_curvature();
    if (const auto* s = std::get_if<SkewPartEndo>(&kind)) return s->base->needs_curvature();
    return false;
  }
  bool is_zero() const {
    if (const auto* p = std::get_if<PolynomialEndo>(&kind)) {
      for (const auto& c : p->comps)
        if (!c.is_zero()) return false;
      return true;
    }
    return false;
  }
  std::string describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PolynomialEndo>) return "polynomial";
          if constexpr (std::is_same_v<K, IdentityEndo>) return "identity";
          if constexpr (std::is_same_v<K, RicciOperatorEndo>) return "ricci_operator";
          if constexpr (std::is_same_v<K, SymmetricPartEndo>) return "symmetric_part(" + k.base->describe() + ")";
          if constexpr (std::is_same_v<K, SkewPartEndo>) return "skew_part(" + k.base->describe() + ")";
        },
        kind);
  }
};

struct EuclideanMetric {};
/// r² (dθ² + sin²θ dφ²).
struct RoundSphereMetric {
  double radius = 1.0;
};
/// (dx² + dy²) / (k y²), constant curvature −k.
struct HalfPlaneMetric {
  double k = 1.0;
};
/// comps[i * n + j] = g_ij, stored symmetric.
struct PolynomialMetric {
  std::vector<Polynomial> comps;
};

struct MetricField {
  int n = 0;
  std::variant<EuclideanMetric, RoundSphereMetric, HalfPlaneMetric, PolynomialMetric> kind;

  template <Scalar S>
  Mat<S> evaluate(std::span<const S> x) const {
    Mat<S> g(n);
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, EuclideanMetric>) {
            for (int i = 0; i < n; ++i) g(i, i) = S(1.0);
          } else if constexpr (std::is_same_v<K, RoundSphereMetric>) {
            using std::sin;
            const double r2 = k.radius * k.radius;
            const S s = sin(x[0]);
            g(0, 0) = S(r2);
            g(1, 1) = s * s * r2;
          } else if constexpr (std::is_same_v<K, HalfPlaneMetric>) {
            using unicon::reciprocal;
            const S inv_y = reciprocal(x[1]);
            const S c = inv_y * inv_y * (1.0 / k.k);
            g(0, 0) = c;
            g(1, 1) = c;
          } else {
            for (int i = 0; i < n; ++i)
              for (int j = i; j < n; ++j) {
                S v = k.comps[static_cast<std::size_t>(i * n + j)].evaluate(x);
                g(j, i) = v;
                g(i, j) = std::move(v);
              }
          }
        },
        kind);
    return g;
  }
};

struct Manifold {
  std::string name;
  Chart chart;
  MetricField metric;
};

inline void require_inside(const Chart& chart, std::span<const double> p) {
  if (static_cast<int>(p.size()) != chart.dim) {
    throw DimensionMismatch("point has " + std::to_string(p.size()) + " coordinates, chart dimension is " +
                            std::to_string(chart.dim));
  }
  if (!chart.contains(p)) throw PointOutsideDomain("point lies outside the chart domain");
}

/// Metric at p as a jet of type S; checks the domain and positive definiteness.
template <Scalar S>
Mat<S> evaluate_metric(const Manifold& m, std::span<const double> p) {
  require_inside(m.chart, p);
  const std::vector<S> x = seed_point<S>(p);
  Mat<S> g = m.metric.evaluate<S>(std::span<const S>(x));
  require_positive_definite(values(g));
  return g;
}

template <Scalar S>
S evaluate_scalar(const ScalarField& f, std::span<const double> p) {
  const std::vector<S> x = seed_point<S>(p);
  return f.evaluate(std::span<const S>(x));
}

template <Scalar S>
Vec<S> evaluate_one_form(const OneFormField& f, std::span<const double> p) {
  const std::vector<S> x = seed_point<S>(p);
  return f.evaluate(std::span<const S>(x));
}

/// φ at p as a jet of type S. Metric-derived fields pull the metric at the
/// jet level they need (two levels up for the Ricci operator).
template <Scalar S>
Mat<S> evaluate_endo(const EndoField& phi, const Manifold& m, std::span<const double> p) {
  const int n = phi.n;
  return std::visit(
      [&](const auto& k) -> Mat<S> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PolynomialEndo>) {
          const std::vector<S> x = seed_point<S>(p);
          Mat<S> out(n);
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              out(a, b) = k.comps[static_cast<std::size_t>(a * n + b)].evaluate(std::span<const S>(x));
          return out;
        } else if constexpr (std::is_same_v<K, IdentityEndo>) {
          return identity<S>(n);
        } else if constexpr (std::is_same_v<K, RicciOperatorEndo>) {
          if constexpr (jet_traits<S>::order + 2 > 3) {
            throw JetOrderUnsupported("Ricci operator jets beyond first order need metric jets above order 3");
          } else {
            return ricci_operator<S>(evaluate_metric<Jet<Jet<S>>>(m, p));
          }
        } else {
          const Mat<S> base = evaluate_endo<S>(*k.base, m, p);
          const Mat<S> g = evaluate_metric<S>(m, p);
          const Mat<S> adjoint = matmul(matmul(inverse_metric(g), transpose(base)), g);
          const double sign = std::is_same_v<K, SymmetricPartEndo> ? 1.0 : -1.0;
          Mat<S> out(n);
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) out(a, b) = (base(a, b) + adjoint(a, b) * sign) * 0.5;
          return out;
        }
      },
      phi.kind);
}

// ---------------------------------------------------------------------------
// Plain-array views of jets.

struct ScalarFieldJet {
  double value = 0.0;
  std::vector<double> grad;
};

struct OneFormFieldJet {
  Vec<double> comp;
  Mat<double> d1;  // d1(i, j) = ∂_j η_i
};

struct EndoFieldJet {
  Mat<double> comp;        // comp(k, i) = φ^k_i
  Tensor<double, 3> d1;    // d1(k, i, j) = ∂_j φ^k_i
};

struct MetricFieldJet {
  int order = 0;
  Mat<double> comp;
  Tensor<double, 3> d1;  // d1(i, j, a) = ∂_a g_ij
  Tensor<double, 4> d2;  // d2(i, j, a, b) = ∂_a ∂_b g_ij
  Tensor<double, 5> d3;
};

inline ScalarFieldJet scalar_jet(const Jet1& f, int n) {
  ScalarFieldJet out{f.v, std::vector<double>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) out.grad[static_cast<std::size_t>(i)] = f.d[static_cast<std::size_t>(i)];
  return out;
}

inline OneFormFieldJet one_form_jet(const Vec<Jet1>& eta) {
  const int n = eta.dim();
  OneFormFieldJet out{values(eta), Mat<double>(n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.d1(i, j) = eta(i).d[static_cast<std::size_t>(j)];
  return out;
}

inline EndoFieldJet endo_jet(const Mat<Jet1>& phi) {
  const int n = phi.dim();
  EndoFieldJet out{values(phi), Tensor<double, 3>(n)};
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.d1(k, i, j) = phi(k, i).d[static_cast<std::size_t>(j)];
  return out;
}

inline MetricFieldJet evaluate_metric_jets(const Manifold& m, std::span<const double> p, int order) {
  if (order < 1 || order > 3) {
    throw JetOrderUnsupported("metric jets are available for orders 1..3, requested " + std::to_string(order));
  }
  const Mat<Jet3> g = evaluate_metric<Jet3>(m, p);
  const int n = g.dim();
  MetricFieldJet out;
  out.order = order;
  out.comp = values(g);
  out.d1 = Tensor<double, 3>(n);
  if (order >= 2) out.d2 = Tensor<double, 4>(n);
  if (order >= 3) out.d3 = Tensor<double, 5>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) {
        const int ia[] = {a};
        out.d1(i, j, a) = partial(g(i, j), ia);
        for (int b = 0; order >= 2 && b < n; ++b) {
          const int iab[] = {a, b};
          out.d2(i, j, a, b) = partial(g(i, j), iab);
          for (int c = 0; order >= 3 && c < n; ++c) {
            const int iabc[] = {a, b, c};
            out.d3(i, j, a, b, c) = partial(g(i, j), iabc);
          }
        }
      }
  return out;
}

// ---------------------------------------------------------------------------
// Preset manifolds.

inline Manifold euclidean(int n) {
  if (n < 2 || n > kMaxDim) throw BadParams("euclidean dimension must be in [2, 4]");
  return {"euclidean(" + std::to_string(n) + ")",
          Chart::box(std::vector<double>(static_cast<std::size_t>(n), -2.0),
                     std::vector<double>(static_cast<std::size_t>(n), 2.0)),
          MetricField{n, EuclideanMetric{}}};
}

/// Coordinates (θ, φ) with θ kept 0.3 away from the poles.
inline Manifold sphere2(double radius) {
  if (!(radius > 0.0)) throw BadParams("sphere2 radius must be positive");
  return {"sphere2(" + std::to_string(radius) + ")",
          Chart::box({0.3, -std::numbers::pi}, {std::numbers::pi - 0.3, std::numbers::pi}),
          MetricField{2, RoundSphereMetric{radius}}};
}

inline Manifold half_plane(double k) {
  if (!(k > 0.0)) throw BadParams("half_plane curvature scale must be positive");
  return {"half_plane(" + std::to_string(k) + ")", Chart::box({-5.0, 0.5}, {5.0, 5.0}),
          MetricField{2, HalfPlaneMetric{k}}};
}

inline constexpr double kBumpyHalfWidth = 0.5;

/// δ_ij + ε p_ij on [−½, ½]^n with p_ij random cubic polynomials. Rejects ε
/// unless a Gershgorin bound over the whole box certifies positive
/// definiteness.
inline Manifold bumpy(int n, double epsilon, std::uint64_t seed) {
  if (n < 2 || n > kMaxDim) throw BadParams("bumpy dimension must be in [2, 4]");
  if (!(epsilon >= 0.0)) throw BadParams("bumpy epsilon must be non-negative");
  std::mt19937_64 rng(seed);
  std::vector<Polynomial> comps(static_cast<std::size_t>(n * n), Polynomial(n));
  std::vector<double> bound(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Polynomial p = epsilon * random_polynomial(n, 3, rng);
      bound[static_cast<std::size_t>(i * n + j)] = bound[static_cast<std::size_t>(j * n + i)] =
          sup_norm_bound(p, kBumpyHalfWidth);
      if (i == j) p = p + Polynomial::constant(n, 1.0);
      comps[static_cast<std::size_t>(i * n + j)] = p;
      comps[static_cast<std::size_t>(j * n + i)] = p;
    }
  double worst_row = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += bound[static_cast<std::size_t>(i * n + j)];
    worst_row = std::max(worst_row, row);
  }
  const double lo = 1.0 - worst_row;
  const double hi = 1.0 + worst_row;
  if (!(lo > 1e-10 * hi)) {
    throw BadParams("bumpy epsilon " + std::to_string(epsilon) + " too large: positive definiteness not guaranteed");
  }
  return {"bumpy(" + std::to_string(n) + "," + std::to_string(epsilon) + "," + std::to_string(seed) + ")",
          Chart::box(std::vector<double>(static_cast<std::size_t>(n), -kBumpyHalfWidth),
                     std::vector<double>(static_cast<std::size_t>(n), kBumpyHalfWidth)),
          MetricField{n, PolynomialMetric{std::move(comps)}}};
}

struct PresetParams {
  int n = 2;
  double radius = 1.0;
  double k = 1.0;
  double epsilon = 0.05;
  std::uint64_t seed = 0;
};

inline Manifold preset_manifold(std::string_view name, const PresetParams& params) {
  if (name == "euclidean") return euclidean(params.n);
  if (name == "sphere2") return sphere2(params.radius);
  if (name == "half_plane") return half_plane(params.k);
  if (name == "bumpy") return bumpy(params.n, params.epsilon, params.seed);
  throw UnknownPreset("unknown manifold preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Random fields (degree ≤ 3, coefficients in [−1, 1]).

inline ScalarField random_scalar(int n, std::mt19937_64& rng) { return random_polynomial(n, 3, rng); }

inline OneFormField random_one_form(int n, std::mt19937_64& rng) {
  OneFormField f;
  for (int i = 0; i < n; ++i) f.comps.push_back(random_polynomial(n, 3, rng));
  return f;
}

inline EndoField random_endo(int n, std::mt19937_64& rng) {
  PolynomialEndo e;
  for (int a = 0; a < n * n; ++a) e.comps.push_back(random_polynomial(n, 3, rng));
  return {n, std::move(e)};
}

}  // namespace unicon
