#pragma once

// Curvature of ∇̃ two ways:
//   * closed form: Levi-Civita R plus fourteen correction groups built from
//     the helper tensors β, B, α, A, μ, R₀;
//   * direct: R̃^l_{ijk} from Γ̃ and its exact first partials.
// The two routes share only the raw field jets and the Levi-Civita baseline.
// The closed form never touches H or Γ̃, and the direct route never touches
// the helper tensors.

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unicon/connection.hpp"

namespace unicon {

enum class TermGroup : int {
  kRiemann = 0,   // R(X,Y)Z
  kDuPhi2,        // −2du(X,Y) φ₂Z
  kAlphaPhi1,     // −α(u,Y,Z) φ₁X + α(u,X,Z) φ₁Y
  kPhi1A,         // −g(φ₁Y,Z) A(u,X) + g(φ₁X,Z) A(u,Y)
  kR0Mu,          // −R₀(U, μ(X,Y) − μ(Y,X)) Z
  kUNablaPhi2,    // u(X)(∇_Yφ₂)Z − u(Y)(∇_Xφ₂)Z
  kF1Block,       // −f₁{2du₁ Z − β(u₁,Y,Z)X + … + u(Y)R₀(φX,U₁)Z − u(X)R₀(φY,U₁)Z}
  kF2Block,       // f₂{g(φY,Z)u(X)U₂ − … + g(X,Z)B(u₂,Y)}
  kF1Squared,     // −f₁²{…}
  kF2Squared,     // f₂²{…}
  kF1F2,          // f₁f₂{…}
  kGradF1X,       // −(Xf₁){u₁(Y)Z + u₁(Z)Y − g(Y,Z)U₁}
  kGradF1Y,       // (Yf₁){u₁(X)Z + u₁(Z)X − g(X,Z)U₁}
  kGradF2,        // −(Xf₂)g(Y,Z)U₂ + (Yf₂)g(X,Z)U₂
};
inline constexpr int kTermGroupCount = 14;
inline constexpr std::array<std::string_view, kTermGroupCount> kTermGroupNames = {
    "riemann",  "du_phi2",  "alpha_phi1", "phi1_A", "r0_mu",     "u_nabla_phi2", "f1_block",
    "f2_block", "f1_squared", "f2_squared", "f1_f2", "grad_f1_x", "grad_f1_y",    "grad_f2"};

using TermGroupWeights = std::array<double, kTermGroupCount>;
inline constexpr TermGroupWeights kUnitGroupWeights = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};

/// Double-level data consumed by the closed-form route.
struct FormulaContext {
  int n = 0;
  Mat<double> g, ginv;
  Tensor<double, 3> gamma;     // Levi-Civita Γ
  Tensor<double, 4> riemann;   // Levi-Civita R
  double f1 = 0.0, f2 = 0.0;
  std::vector<double> df1, df2;
  Vec<Jet1> u_jet, u1_jet, u2_jet;
  Vec<double> u, u1, u2, U, U1, U2;
  Mat<double> phi;
  PhiSplit<double> split;
  Tensor<double, 3> nabla_phi1;  // (i, k, j) = (∇_i φ₁)^k_j
  Tensor<double, 3> nabla_phi2;
};

/// (∇φ₁, ∇φ₂) from ∇φ by metric compatibility:
/// ∇Φ_{ij} = g_mj (∇φ)^m_i, split, then raised with g⁻¹.
inline std::pair<Tensor<double, 3>, Tensor<double, 3>> split_covariant(const Tensor<double, 3>& nabla_phi,
                                                                       const Mat<double>& g,
                                                                       const Mat<double>& ginv) {
  const int n = g.dim();
  Tensor<double, 3> dPhi(n);  // (l, i, j) = (∇_l Φ)_{ij}
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) dPhi(l, i, j) += g(m, j) * nabla_phi(l, m, i);
  Tensor<double, 3> d1(n), d2(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m) {
          d1(l, k, i) += ginv(k, m) * 0.5 * (dPhi(l, i, m) + dPhi(l, m, i));
          d2(l, k, i) += ginv(k, m) * 0.5 * (dPhi(l, i, m) - dPhi(l, m, i));
        }
  return {d1, d2};
}

inline FormulaContext formula_context(const ConnectionSpec& spec, const Manifold& m, std::span<const double> p) {
  spec.validate();
  if (spec.n != m.chart.dim) throw DimensionMismatch("connection and manifold dimensions differ");
  FormulaContext c;
  c.n = spec.n;
  const Mat<Jet2> gj = evaluate_metric<Jet2>(m, p);
  const Tensor<Jet1, 3> gamma_jet = christoffel<Jet1>(gj);
  c.g = values(gj);
  c.ginv = inverse_metric(c.g);
  c.gamma = values(gamma_jet);
  c.riemann = riemann<double>(gamma_jet);

  const Jet1 f1 = evaluate_scalar<Jet1>(spec.f1, p);
  const Jet1 f2 = evaluate_scalar<Jet1>(spec.f2, p);
  c.f1 = f1.v;
  c.f2 = f2.v;
  c.df1 = scalar_jet(f1, c.n).grad;
  c.df2 = scalar_jet(f2, c.n).grad;

  c.u_jet = evaluate_one_form<Jet1>(*spec.u, p);
  c.u1_jet = evaluate_one_form<Jet1>(*spec.u1, p);
  c.u2_jet = evaluate_one_form<Jet1>(*spec.u2, p);
  c.u = values(c.u_jet);
  c.u1 = values(c.u1_jet);
  c.u2 = values(c.u2_jet);
  c.U = sharp(c.u, c.ginv);
  c.U1 = sharp(c.u1, c.ginv);
  c.U2 = sharp(c.u2, c.ginv);

  const Mat<Jet1> phi_jet = evaluate_endo<Jet1>(*spec.phi, m, p);
  c.phi = values(phi_jet);
  c.split = split_phi(c.phi, c.g, c.ginv);
  std::tie(c.nabla_phi1, c.nabla_phi2) = split_covariant(cov_deriv_endo(phi_jet, c.gamma), c.g, c.ginv);
  return c;
}

// ---------------------------------------------------------------------------
// Helper tensors.

struct EtaHelpers {
  Mat<double> beta;   // (i, j) = β(η, ∂_i, ∂_j)
  Mat<double> bvec;   // (i, k) = B(η, ∂_i)^k
  Mat<double> alpha;  // (i, j) = α(η, ∂_i, ∂_j)
  Mat<double> avec;   // (i, k) = A(η, ∂_i)^k
};

inline EtaHelpers eta_helpers(const FormulaContext& c, const Vec<Jet1>& eta_jet) {
  const int n = c.n;
  const auto& ph1 = c.split.phi1;
  const auto& ph2 = c.split.phi2;
  const Mat<double> nabla_eta = cov_deriv_oneform(eta_jet, c.gamma);
  const Vec<double> eta = values(eta_jet);
  const Vec<double> xi = sharp(eta, c.ginv);
  // ∇ξ = g⁻¹ ∇η since ∇g = 0.
  Mat<double> nabla_xi(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) nabla_xi(i, k) += c.ginv(k, m) * nabla_eta(i, m);

  double eta_U = 0.0;
  for (int m = 0; m < n; ++m) eta_U += eta(m) * c.U(m);
  std::vector<double> eta_phi1(static_cast<std::size_t>(n), 0.0), eta_phi2(static_cast<std::size_t>(n), 0.0),
      phi2_xi(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m) {
      eta_phi1[static_cast<std::size_t>(i)] += eta(m) * ph1(m, i);
      eta_phi2[static_cast<std::size_t>(i)] += eta(m) * ph2(m, i);
      phi2_xi[static_cast<std::size_t>(i)] += ph2(i, m) * xi(m);
    }

  EtaHelpers h{Mat<double>(n), Mat<double>(n), Mat<double>(n), Mat<double>(n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      h.beta(i, j) = nabla_eta(i, j) + c.u(i) * eta_phi2[uj] - eta_phi1[ui] * c.u(j) + eta_U * c.split.Phi1(i, j);
      h.alpha(i, j) = h.beta(i, j) - 0.5 * eta_U * c.split.Phi1(i, j);
      h.bvec(i, j) = nabla_xi(i, j) - c.u(i) * phi2_xi[uj] - eta_phi1[ui] * c.U(j) + eta_U * ph1(j, i);
      h.avec(i, j) = h.bvec(i, j) - 0.5 * eta_U * ph1(j, i);
    }
  return h;
}

/// mu(k, i, j) = μ(∂_i, ∂_j)^k = (∇_i φ₁)^k_j − u_i (φ₂φ₁)^k_j.
inline Tensor<double, 3> mu_tensor(const FormulaContext& c) {
  const int n = c.n;
  const Mat<double> p21 = matmul(c.split.phi2, c.split.phi1);
  Tensor<double, 3> mu(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mu(k, i, j) = c.nabla_phi1(i, k, j) - c.u(i) * p21(k, j);
  return mu;
}

/// R₀(X, Y)Z = g(Y, Z)X − g(X, Z)Y.
inline Vec<double> r0(const Mat<double>& g, const Vec<double>& x, const Vec<double>& y, const Vec<double>& z) {
  const int n = g.dim();
  double gyz = 0.0, gxz = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      gyz += g(a, b) * y(a) * z(b);
      gxz += g(a, b) * x(a) * z(b);
    }
  Vec<double> out(n);
  for (int k = 0; k < n; ++k) out(k) = gyz * x(k) - gxz * y(k);
  return out;
}

/// 2dη(∂_i, ∂_j) = ∂_i η_j − ∂_j η_i.
inline Mat<double> exterior_2du(const Vec<Jet1>& eta) {
  const int n = eta.dim();
  Mat<double> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = eta(j).d[static_cast<std::size_t>(i)] - eta(i).d[static_cast<std::size_t>(j)];
  return out;
}

// ---------------------------------------------------------------------------
// Closed form.

struct CurvatureFormula {
  Tensor<double, 4> total;                              // r(l, i, j, k)
  std::array<Tensor<double, 4>, kTermGroupCount> groups;  // unweighted
};

inline CurvatureFormula curvature_formula(const FormulaContext& c, const TermGroupWeights& w = kUnitGroupWeights) {
  const int n = c.n;
  const auto& g = c.g;
  const auto& ph1 = c.split.phi1;
  const auto& ph2 = c.split.phi2;
  const auto& Phi = c.split.Phi;
  const auto& Phi1 = c.split.Phi1;

  const Mat<double> du = exterior_2du(c.u_jet);
  const Mat<double> du1 = exterior_2du(c.u1_jet);
  const EtaHelpers hu = eta_helpers(c, c.u_jet);
  const EtaHelpers h1 = eta_helpers(c, c.u1_jet);
  const EtaHelpers h2 = eta_helpers(c, c.u2_jet);
  const Tensor<double, 3> mu = mu_tensor(c);

  double u1_u1 = 0.0, u1_u2 = 0.0;
  for (int m = 0; m < n; ++m) {
    u1_u1 += c.u1(m) * c.U1(m);
    u1_u2 += c.u1(m) * c.U2(m);
  }

  CurvatureFormula out;
  for (auto& t : out.groups) t = Tensor<double, 4>(n);
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double gjk = g(j, k), gik = g(i, k);
        // μ(X,Y) − μ(Y,X) and the two R₀ terms that need vector arguments.
        Vec<double> mdiff(n), phi_x(n), phi_y(n), ez(n);
        for (int l = 0; l < n; ++l) {
          mdiff(l) = mu(l, i, j) - mu(l, j, i);
          phi_x(l) = c.phi(l, i);
          phi_y(l) = c.phi(l, j);
        }
        ez(k) = 1.0;
        const Vec<double> r0_mu = r0(g, c.U, mdiff, ez);
        const Vec<double> r0_phix = r0(g, phi_x, c.U1, ez);
        const Vec<double> r0_phiy = r0(g, phi_y, c.U1, ez);

        for (int l = 0; l < n; ++l) {
          auto& G = out.groups;
          G[0](l, i, j, k) = c.riemann(l, i, j, k);
          G[1](l, i, j, k) = -du(i, j) * ph2(l, k);
          G[2](l, i, j, k) = -hu.alpha(j, k) * ph1(l, i) + hu.alpha(i, k) * ph1(l, j);
          G[3](l, i, j, k) = -Phi1(j, k) * hu.avec(i, l) + Phi1(i, k) * hu.avec(j, l);
          G[4](l, i, j, k) = -r0_mu(l);
          G[5](l, i, j, k) = c.u(i) * c.nabla_phi2(j, l, k) - c.u(j) * c.nabla_phi2(i, l, k);
          G[6](l, i, j, k) =
              -c.f1 * (du1(i, j) * delta(l, k) - h1.beta(j, k) * delta(l, i) + h1.beta(i, k) * delta(l, j) -
                       gjk * h1.bvec(i, l) + gik * h1.bvec(j, l) + c.u(j) * r0_phix(l) - c.u(i) * r0_phiy(l));
          G[7](l, i, j, k) = c.f2 * (Phi(j, k) * c.u(i) * c.U2(l) - Phi(i, k) * c.u(j) * c.U2(l) -
                                     gjk * h2.bvec(i, l) + gik * h2.bvec(j, l));
          // R₀(X,U₁)U₁ = |u₁|² X − u₁(X) U₁,  R₀(X,Y)U₁ = u₁(Y) X − u₁(X) Y.
          const double r0_x_u1 = u1_u1 * delta(l, i) - c.u1(i) * c.U1(l);
          const double r0_y_u1 = u1_u1 * delta(l, j) - c.u1(j) * c.U1(l);
          const double r0_xy = c.u1(j) * delta(l, i) - c.u1(i) * delta(l, j);
          G[8](l, i, j, k) = -c.f1 * c.f1 * (gjk * r0_x_u1 - gik * r0_y_u1 - c.u1(k) * r0_xy);
          G[9](l, i, j, k) = c.f2 * c.f2 * (gjk * c.u2(i) * c.U2(l) - gik * c.u2(j) * c.U2(l));
          // R₀(X,U₂)U₁ = g(U₂,U₁) X − u₁(X) U₂.
          const double r0_x_u2 = u1_u2 * delta(l, i) - c.u1(i) * c.U2(l);
          const double r0_y_u2 = u1_u2 * delta(l, j) - c.u1(j) * c.U2(l);
          G[10](l, i, j, k) = c.f1 * c.f2 *
                              (gjk * (r0_x_u2 - c.u2(i) * c.U1(l)) - gik * (r0_y_u2 - c.u2(j) * c.U1(l)));
          G[11](l, i, j, k) = -c.df1[static_cast<std::size_t>(i)] *
                              (c.u1(j) * delta(l, k) + c.u1(k) * delta(l, j) - gjk * c.U1(l));
          G[12](l, i, j, k) = c.df1[static_cast<std::size_t>(j)] *
                              (c.u1(i) * delta(l, k) + c.u1(k) * delta(l, i) - gik * c.U1(l));
          G[13](l, i, j, k) = -c.df2[static_cast<std::size_t>(i)] * gjk * c.U2(l) +
                              c.df2[static_cast<std::size_t>(j)] * gik * c.U2(l);
        }
      }

  out.total = Tensor<double, 4>(n);
  for (int t = 0; t < kTermGroupCount; ++t) {
    const double wt = w[static_cast<std::size_t>(t)];
    if (wt != 0.0) out.total += wt * out.groups[static_cast<std::size_t>(t)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direct oracle.

inline Tensor<double, 4> curvature_direct(const ConnectionSpec& spec, const Manifold& m, std::span<const double> p,
                                          const HTermWeights& hw = kUnitHWeights) {
  const PointFrame<Jet1> fr = point_frame<Jet1>(spec, m, p, hw);
  return riemann<double>(fr.gamma_tilde);
}

/// max |r(l,i,j,k) + r(l,j,i,k)|, normalized like every other residual.
inline double antisymmetry_residual(const Tensor<double, 4>& r) {
  const int n = r.dim();
  double worst = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(r(l, i, j, k) + r(l, j, i, k)));
  return worst / std::max(1.0, max_abs(r));
}

}  // namespace unicon
