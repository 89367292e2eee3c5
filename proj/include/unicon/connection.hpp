#pragma once

// The unified connection ∇̃ = ∇ + H built from (f₁, f₂, u, u₁, u₂, φ), its
// torsion and non-metricity, each paired with the closed form it is supposed
// to satisfy.

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "unicon/fields.hpp"

namespace unicon {

struct ConnectionSpec {
  int n = 0;
  ScalarField f1;
  ScalarField f2;
  std::shared_ptr<const OneFormField> u;
  std::shared_ptr<const OneFormField> u1;
  std::shared_ptr<const OneFormField> u2;
  std::shared_ptr<const EndoField> phi;

  static ConnectionSpec zero(int n) {
    auto z = std::make_shared<const OneFormField>(OneFormField::zero(n));
    return {n, Polynomial(n), Polynomial(n), z, z, z, std::make_shared<const EndoField>(EndoField::zero(n))};
  }

  void validate() const {
    auto check = [this](int m, std::string_view what) {
      if (m != n) {
        throw DimensionMismatch(std::string(what) + " has dimension " + std::to_string(m) + ", connection has " +
                                std::to_string(n));
      }
    };
    if (!u || !u1 || !u2 || !phi) throw MissingBinding("connection spec has an unset field");
    if (!f1.is_zero()) check(f1.dim(), "f1");
    if (!f2.is_zero()) check(f2.dim(), "f2");
    check(u->dim(), "u");
    check(u1->dim(), "u1");
    check(u2->dim(), "u2");
    check(phi->n, "phi");
    for (const auto* form : {u.get(), u1.get(), u2.get()})
      for (const auto& c : form->comps)
        if (!c.is_zero()) check(c.dim(), "one-form component");
  }
};

/// Every field drawn from random cubic polynomials; φ is a full matrix so
/// both φ₁ and φ₂ are generic.
inline ConnectionSpec random_spec(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConnectionSpec s;
  s.n = n;
  s.f1 = random_scalar(n, rng);
  s.f2 = random_scalar(n, rng);
  s.u = std::make_shared<const OneFormField>(random_one_form(n, rng));
  s.u1 = std::make_shared<const OneFormField>(random_one_form(n, rng));
  s.u2 = std::make_shared<const OneFormField>(random_one_form(n, rng));
  s.phi = std::make_shared<const EndoField>(random_endo(n, rng));
  return s;
}

// ---------------------------------------------------------------------------

/// ξ^k = g^{km} η_m, so that η(X) = g(ξ, X).
template <Scalar S>
Vec<S> sharp(const Vec<S>& eta, const Mat<S>& ginv) {
  const int n = eta.dim();
  Vec<S> xi(n);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) xi(k) += ginv(k, m) * eta(m);
  return xi;
}

template <Scalar S>
struct PhiSplit {
  Mat<S> Phi;   // Phi(i, j) = g(φ∂_i, ∂_j) = g_mj φ^m_i
  Mat<S> Phi1;  // symmetric part
  Mat<S> Phi2;  // skew part
  Mat<S> phi1;  // phi1(k, i) = (φ₁)^k_i with Phi1 = g(φ₁·, ·)
  Mat<S> phi2;
};

template <Scalar S>
PhiSplit<S> split_phi(const Mat<S>& phi, const Mat<S>& g, const Mat<S>& ginv) {
  const int n = phi.dim();
  PhiSplit<S> out{Mat<S>(n), Mat<S>(n), Mat<S>(n), Mat<S>(n), Mat<S>(n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) out.Phi(i, j) += g(m, j) * phi(m, i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.Phi1(i, j) = (out.Phi(i, j) + out.Phi(j, i)) * 0.5;
      out.Phi2(i, j) = (out.Phi(i, j) - out.Phi(j, i)) * 0.5;
    }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m) {
        out.phi1(k, i) += ginv(k, m) * out.Phi1(i, m);
        out.phi2(k, i) += ginv(k, m) * out.Phi2(i, m);
      }
  return out;
}

// ---------------------------------------------------------------------------
// Deformation tensor H(∂_i, ∂_j) = H^k_{ij} ∂_k, split into its five addends
// so each one can be toggled for fault injection.

enum class HTerm : int { kUPhi1 = 0, kUPhi2, kPhi1U, kF1, kF2 };
inline constexpr int kHTermCount = 5;
inline constexpr std::array<std::string_view, kHTermCount> kHTermNames = {"h_u_phi1", "h_u_phi2", "h_phi1_U",
                                                                           "h_f1", "h_f2"};

using HTermWeights = std::array<double, kHTermCount>;
inline constexpr HTermWeights kUnitHWeights = {1.0, 1.0, 1.0, 1.0, 1.0};

template <Scalar S>
struct FieldValues {
  Mat<S> g;
  Mat<S> ginv;
  S f1{};
  S f2{};
  Vec<S> u, u1, u2;
  Vec<S> U, U1, U2;
  Mat<S> phi;
  PhiSplit<S> split;
};

/// Terms, in order:
///   u(Y) φ₁X,  −u(X) φ₂Y,  −g(φ₁X, Y) U,
///   −f₁{u₁(X)Y + u₁(Y)X − g(X, Y)U₁},  −f₂ g(X, Y) U₂.
template <Scalar S>
std::array<Tensor<S, 3>, kHTermCount> deformation_terms(const FieldValues<S>& fv) {
  const int n = fv.g.dim();
  std::array<Tensor<S, 3>, kHTermCount> t;
  for (auto& x : t) x = Tensor<S, 3>(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        t[0](k, i, j) = fv.u(j) * fv.split.phi1(k, i);
        t[1](k, i, j) = -(fv.u(i) * fv.split.phi2(k, j));
        t[2](k, i, j) = -(fv.split.Phi1(i, j) * fv.U(k));
        S brace = -(fv.g(i, j) * fv.U1(k));
        if (k == j) brace += fv.u1(i);
        if (k == i) brace += fv.u1(j);
        t[3](k, i, j) = -(fv.f1 * brace);
        t[4](k, i, j) = -(fv.f2 * fv.g(i, j) * fv.U2(k));
      }
  return t;
}

template <Scalar S>
Tensor<S, 3> deformation_H(const FieldValues<S>& fv, const HTermWeights& w = kUnitHWeights) {
  const auto terms = deformation_terms(fv);
  Tensor<S, 3> h(fv.g.dim());
  for (int t = 0; t < kHTermCount; ++t) {
    if (w[static_cast<std::size_t>(t)] == 1.0) {
      h += terms[static_cast<std::size_t>(t)];
    } else if (w[static_cast<std::size_t>(t)] != 0.0) {
      h += w[static_cast<std::size_t>(t)] * terms[static_cast<std::size_t>(t)];
    }
  }
  return h;
}

/// All evaluated components of the construction at one point, at jet level S.
template <Scalar S>
struct PointFrame {
  FieldValues<S> fields;
  std::vector<Mat<S>> dg;    // dg[a](i, j) = ∂_a g_ij
  Tensor<S, 3> gamma;        // Levi-Civita Γ
  Tensor<S, 3> h;            // H^k_{ij}
  Tensor<S, 3> gamma_tilde;  // Γ̃ = Γ + H
};

template <Scalar S>
FieldValues<S> evaluate_fields(const ConnectionSpec& spec, const Manifold& m, std::span<const double> p,
                               const Mat<S>& g) {
  FieldValues<S> fv;
  fv.g = g;
  fv.ginv = inverse_metric(g);
  fv.f1 = evaluate_scalar<S>(spec.f1, p);
  fv.f2 = evaluate_scalar<S>(spec.f2, p);
  fv.u = evaluate_one_form<S>(*spec.u, p);
  fv.u1 = spec.u1 == spec.u ? fv.u : evaluate_one_form<S>(*spec.u1, p);
  fv.u2 = spec.u2 == spec.u ? fv.u : spec.u2 == spec.u1 ? fv.u1 : evaluate_one_form<S>(*spec.u2, p);
  fv.U = sharp(fv.u, fv.ginv);
  fv.U1 = sharp(fv.u1, fv.ginv);
  fv.U2 = sharp(fv.u2, fv.ginv);
  fv.phi = evaluate_endo<S>(*spec.phi, m, p);
  fv.split = split_phi(fv.phi, fv.g, fv.ginv);
  return fv;
}

template <Scalar S>
PointFrame<S> point_frame(const ConnectionSpec& spec, const Manifold& m, std::span<const double> p,
                          const HTermWeights& w = kUnitHWeights) {
  spec.validate();
  if (spec.n != m.chart.dim) {
    throw DimensionMismatch("connection dimension " + std::to_string(spec.n) + " differs from manifold dimension " +
                            std::to_string(m.chart.dim));
  }
  const Mat<Jet<S>> gj = evaluate_metric<Jet<S>>(m, p);
  PointFrame<S> fr;
  fr.fields = evaluate_fields<S>(spec, m, p, truncate(gj));
  for (int a = 0; a < spec.n; ++a) fr.dg.push_back(partial(gj, a));
  fr.gamma = christoffel<S>(gj);
  fr.h = deformation_H(fr.fields, w);
  fr.gamma_tilde = fr.gamma + fr.h;
  return fr;
}

// ---------------------------------------------------------------------------
// Checks: each returns the directly computed tensor, the closed form, and the
// normalized residual between them.

template <std::size_t R>
struct TensorCheck {
  Tensor<double, R> direct;
  Tensor<double, R> predicted;
  double residual = 0.0;
};

/// t(k, i, j) = T̃^k_{ij}.
template <Scalar S>
Tensor<S, 3> torsion_of(const Tensor<S, 3>& gamma_tilde) {
  const int n = gamma_tilde.dim();
  Tensor<S, 3> t(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        S v = gamma_tilde(k, i, j) - gamma_tilde(k, j, i);
        t(k, j, i) = -v;
        t(k, i, j) = std::move(v);
      }
  return t;
}

/// T̃(X, Y) = u(Y) φX − u(X) φY.
template <Scalar S>
Tensor<S, 3> predicted_torsion(const FieldValues<S>& fv) {
  const int n = fv.g.dim();
  Tensor<S, 3> t(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(k, i, j) = fv.u(j) * fv.phi(k, i) - fv.u(i) * fv.phi(k, j);
  return t;
}

inline TensorCheck<3> torsion(const PointFrame<double>& fr) {
  TensorCheck<3> c{torsion_of(fr.gamma_tilde), predicted_torsion(fr.fields), 0.0};
  c.residual = normalized_residual(c.direct, c.predicted);
  return c;
}

/// q(i, j, k) = (∇̃_i g)_{jk} = ∂_i g_jk − Γ̃^m_ij g_mk − Γ̃^m_ik g_jm.
inline Tensor<double, 3> nonmetricity_of(const Tensor<double, 3>& gamma_tilde, const Mat<double>& g,
                                         const std::vector<Mat<double>>& dg) {
  const int n = g.dim();
  Tensor<double, 3> q(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double v = dg[static_cast<std::size_t>(i)](j, k);
        for (int m = 0; m < n; ++m) v -= gamma_tilde(m, i, j) * g(m, k) + gamma_tilde(m, i, k) * g(j, m);
        q(i, j, k) = v;
        q(i, k, j) = v;
      }
  return q;
}

/// 2 f₁ u₁(X) g(Y, Z) + f₂ {u₂(Y) g(X, Z) + u₂(Z) g(X, Y)}.
inline Tensor<double, 3> predicted_nonmetricity(const FieldValues<double>& fv) {
  const int n = fv.g.dim();
  Tensor<double, 3> q(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        q(i, j, k) = 2.0 * fv.f1 * fv.u1(i) * fv.g(j, k) + fv.f2 * (fv.u2(j) * fv.g(i, k) + fv.u2(k) * fv.g(i, j));
  return q;
}

inline TensorCheck<3> nonmetricity(const PointFrame<double>& fr) {
  TensorCheck<3> c{nonmetricity_of(fr.gamma_tilde, fr.fields.g, fr.dg), predicted_nonmetricity(fr.fields), 0.0};
  c.residual = normalized_residual(c.direct, c.predicted);
  return c;
}

/// T̃′ from g(T̃′(X, Y), Z) = g(T̃(Z, X), Y) using the directly computed
/// torsion, against u(X)φ₁Y − u(X)φ₂Y − Φ(X, Y)U. Layout t(l, i, j).
inline TensorCheck<3> transpose_torsion(const PointFrame<double>& fr) {
  const auto& fv = fr.fields;
  const int n = fv.g.dim();
  const Tensor<double, 3> t = torsion_of(fr.gamma_tilde);
  // lowered(k, i, j) = g(T̃(∂_k, ∂_i), ∂_j)
  Tensor<double, 3> lowered(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) lowered(k, i, j) += t(m, k, i) * fv.g(m, j);
  TensorCheck<3> c{Tensor<double, 3>(n), Tensor<double, 3>(n), 0.0};
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) c.direct(l, i, j) += fv.ginv(l, k) * lowered(k, i, j);
        c.predicted(l, i, j) = fv.u(i) * fv.split.phi1(l, j) - fv.u(i) * fv.split.phi2(l, j) -
                               fv.split.Phi(i, j) * fv.U(l);
      }
  c.residual = normalized_residual(c.direct, c.predicted);
  return c;
}

// ---------------------------------------------------------------------------

struct PointJets {
  MetricFieldJet metric;
  ScalarFieldJet f1, f2;
  OneFormFieldJet u, u1, u2;
  EndoFieldJet phi;
};

/// Plain-array jets of every field of `spec` at p. φ = Q needs metric_order 3.
inline PointJets evaluate_jets(const Manifold& m, const ConnectionSpec& spec, std::span<const double> p,
                               int metric_order) {
  spec.validate();
  if (spec.n != m.chart.dim) throw DimensionMismatch("connection and manifold dimensions differ");
  if (spec.phi->needs_curvature() && metric_order < 3) {
    throw JetOrderUnsupported("phi depends on curvature: its 1-jet needs metric jets of order 3");
  }
  PointJets out;
  out.metric = evaluate_metric_jets(m, p, metric_order);
  out.f1 = scalar_jet(evaluate_scalar<Jet1>(spec.f1, p), spec.n);
  out.f2 = scalar_jet(evaluate_scalar<Jet1>(spec.f2, p), spec.n);
  out.u = one_form_jet(evaluate_one_form<Jet1>(*spec.u, p));
  out.u1 = one_form_jet(evaluate_one_form<Jet1>(*spec.u1, p));
  out.u2 = one_form_jet(evaluate_one_form<Jet1>(*spec.u2, p));
  out.phi = endo_jet(evaluate_endo<Jet1>(*spec.phi, m, p));
  return out;
}

}  // namespace unicon
