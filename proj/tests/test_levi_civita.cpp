#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "unicon/fields.hpp"

using namespace unicon;

namespace {

std::vector<Manifold> presets() {
  return {euclidean(2), euclidean(3), euclidean(4), sphere2(1.0), sphere2(2.0), half_plane(1.0), half_plane(3.0),
          bumpy(2, 0.05, 7), bumpy(3, 0.05, 7)};
}

Tensor<double, 4> curvature_at(const Manifold& m, const std::vector<double>& p) {
  return riemann<double>(christoffel<Jet1>(evaluate_metric<Jet2>(m, p)));
}

double sectional(const Manifold& m, const std::vector<double>& p) {
  const Mat<double> g = evaluate_metric<double>(m, p);
  const Tensor<double, 4> r = curvature_at(m, p);
  double num = 0.0;
  for (int l = 0; l < 2; ++l) num += g(l, 0) * r(l, 0, 1, 1);
  return num / (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1));
}

}  // namespace

TEST(LeviCivita, InverseMetric) {
  const std::vector<double> p = {std::numbers::pi / 4, 0.0};
  const Mat<double> ginv = inverse_metric(evaluate_metric<double>(sphere2(1.0), p));
  EXPECT_NEAR(ginv(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(ginv(1, 1), 2.0, 1e-14);
  EXPECT_NEAR(ginv(0, 1), 0.0, 1e-14);
  const Manifold b = bumpy(2, 0.05, 7);
  for (const auto& q : b.chart.sample(20, 2)) {
    const Mat<double> g = evaluate_metric<double>(b, q);
    EXPECT_LT(max_abs_diff(matmul(g, inverse_metric(g)), identity<double>(2)), 1e-12);
  }
}

TEST(LeviCivita, InverseMetricJetDerivative) {
  const Manifold b = bumpy(3, 0.05, 7);
  for (const auto& q : b.chart.sample(10, 3)) {
    const Mat<Jet1> g = evaluate_metric<Jet1>(b, q);
    const Mat<Jet1> gi = inverse_metric(g);
    const Mat<Jet1> prod = matmul(g, gi);  // identity, so every derivative vanishes
    for (int a = 0; a < 3; ++a) EXPECT_LT(max_abs(partial(prod, a)), 1e-13);
    EXPECT_LT(max_abs_diff(values(prod), identity<double>(3)), 1e-13);
  }
}

TEST(LeviCivita, ChristoffelExamples) {
  const std::vector<double> p = {0.9, 0.4};
  const Tensor<double, 3> gs = christoffel<double>(evaluate_metric<Jet1>(sphere2(1.0), p));
  EXPECT_NEAR(gs(0, 1, 1), -std::sin(0.9) * std::cos(0.9), 1e-14);
  EXPECT_NEAR(gs(1, 0, 1), std::cos(0.9) / std::sin(0.9), 1e-14);
  const std::vector<double> eq = {std::numbers::pi / 2, 0.0};
  EXPECT_NEAR(christoffel<double>(evaluate_metric<Jet1>(sphere2(1.0), eq))(0, 1, 1), 0.0, 1e-15);
  const std::vector<double> h = {0.5, 2.0};
  EXPECT_NEAR(christoffel<double>(evaluate_metric<Jet1>(half_plane(1.0), h))(0, 0, 1), -0.5, 1e-14);
  const std::vector<double> z = {0.1, 0.2, 0.3};
  EXPECT_EQ(max_abs(christoffel<double>(evaluate_metric<Jet1>(euclidean(3), z))), 0.0);
}

TEST(LeviCivita, SectionalCurvatures) {
  for (const auto& p : sphere2(1.0).chart.sample(20, 5)) EXPECT_NEAR(sectional(sphere2(1.0), p), 1.0, 1e-9);
  for (const auto& p : sphere2(2.0).chart.sample(20, 5)) EXPECT_NEAR(sectional(sphere2(2.0), p), 0.25, 1e-9);
  for (const auto& p : half_plane(1.0).chart.sample(20, 5)) EXPECT_NEAR(sectional(half_plane(1.0), p), -1.0, 1e-9);
  for (const auto& p : half_plane(3.0).chart.sample(20, 5)) EXPECT_NEAR(sectional(half_plane(3.0), p), -3.0, 1e-9);
}

TEST(LeviCivita, RicciOnConstantCurvature) {
  for (const auto& p : sphere2(1.0).chart.sample(20, 6)) {
    const RicciData rd = ricci_data(evaluate_metric<Jet3>(sphere2(1.0), p));
    EXPECT_LT(max_abs_diff(rd.s, evaluate_metric<double>(sphere2(1.0), p)), 1e-12);
    EXPECT_LT(max_abs_diff(rd.q, identity<double>(2)), 1e-9);
    EXPECT_LT(max_abs(rd.q_d1), 1e-9);
  }
  for (const auto& p : half_plane(1.0).chart.sample(20, 6)) {
    const RicciData rd = ricci_data(evaluate_metric<Jet3>(half_plane(1.0), p));
    EXPECT_LT(normalized_residual(rd.s, -1.0 * evaluate_metric<double>(half_plane(1.0), p)), 1e-12);
  }
  const RicciData flat = ricci_data(evaluate_metric<Jet3>(euclidean(3), std::vector<double>{0, 1, 0}));
  EXPECT_EQ(max_abs(flat.s), 0.0);
  EXPECT_EQ(max_abs(flat.q), 0.0);
}

TEST(LeviCivita, ContractedBianchi) {
  // ∇_i Q^i_j = ½ ∂_j scal.
  for (const Manifold& m : {bumpy(2, 0.05, 11), bumpy(3, 0.05, 7), sphere2(1.5)}) {
    const int n = m.chart.dim;
    for (const auto& p : m.chart.sample(10, 7)) {
      const RicciData rd = ricci_data(evaluate_metric<Jet3>(m, p));
      const Tensor<double, 3> G = christoffel<double>(evaluate_metric<Jet1>(m, p));
      Vec<double> div(n), half_grad(n);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          half_grad(j) += 0.5 * rd.q_d1(i, i, j);
          div(j) += rd.q_d1(i, j, i);
          for (int k = 0; k < n; ++k) div(j) += G(i, i, k) * rd.q(k, j) - G(k, i, j) * rd.q(i, k);
        }
      }
      EXPECT_LT(normalized_residual(div, half_grad), 1e-10) << m.name;
    }
  }
}

TEST(LeviCivita, StructuralIdentities) {
  for (const Manifold& m : presets()) {
    const int n = m.chart.dim;
    for (const auto& p : m.chart.sample(100, 13)) {
      const Mat<Jet2> gj = evaluate_metric<Jet2>(m, p);
      const Tensor<Jet1, 3> gamma = christoffel<Jet1>(gj);
      const Tensor<double, 3> G = values(gamma);
      const Mat<double> g = values(gj);
      const Tensor<double, 4> r = riemann<double>(gamma);
      const Mat<double> s = ricci_tensor(r);
      double compat = 0.0, sym = 0.0, dsym = 0.0, anti = 0.0, bianchi = 0.0, ricci = 0.0;
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double v = gj(i, j).d[static_cast<std::size_t>(a)].v;
            for (int m2 = 0; m2 < n; ++m2) v -= G(m2, a, i) * g(m2, j) + G(m2, a, j) * g(i, m2);
            compat = std::max(compat, std::abs(v));
            sym = std::max(sym, std::abs(G(a, i, j) - G(a, j, i)));
            for (int b = 0; b < n; ++b)
              dsym = std::max(dsym, std::abs(gamma(a, i, j).d[static_cast<std::size_t>(b)] -
                                             gamma(a, j, i).d[static_cast<std::size_t>(b)]));
            ricci = std::max(ricci, std::abs(s(i, j) - s(j, i)));
            for (int k = 0; k < n; ++k) {
              anti = std::max(anti, std::abs(r(a, i, j, k) + r(a, j, i, k)));
              bianchi = std::max(bianchi, std::abs(r(a, i, j, k) + r(a, j, k, i) + r(a, k, i, j)));
            }
          }
      const double scale = std::max(1.0, max_abs(r));
      EXPECT_LT(compat, 1e-11) << m.name;
      EXPECT_EQ(sym, 0.0) << m.name;
      EXPECT_EQ(dsym, 0.0) << m.name;
      EXPECT_EQ(anti, 0.0) << m.name;
      EXPECT_LT(bianchi / scale, 1e-10) << m.name;
      EXPECT_LT(ricci / scale, 1e-10) << m.name;
    }
  }
}

TEST(LeviCivita, CovariantDerivatives) {
  // Flat, η = x¹dx²: only ∇_1 η_2 = 1.
  const std::vector<double> p = {0.4, 1.1};
  const OneFormField eta{{Polynomial(2), Polynomial::coordinate(2, 0)}};
  const Mat<double> d = cov_deriv_oneform(evaluate_one_form<Jet1>(eta, p), Tensor<double, 3>(2));
  EXPECT_EQ(d(0, 1), 1.0);
  EXPECT_EQ(d(0, 0) + d(1, 0) + d(1, 1), 0.0);
  // sphere2(1), η = dφ: (∇_θ η)_φ = −cotθ.
  const OneFormField dphi{{Polynomial(2), Polynomial::constant(2, 1.0)}};
  const Tensor<double, 3> G = christoffel<double>(evaluate_metric<Jet1>(sphere2(1.0), p));
  const Mat<double> ds = cov_deriv_oneform(evaluate_one_form<Jet1>(dphi, p), G);
  EXPECT_NEAR(ds(0, 1), -std::cos(0.4) / std::sin(0.4), 1e-14);
  EXPECT_EQ(max_abs(cov_deriv_oneform(evaluate_one_form<Jet1>(OneFormField::zero(2), p), G)), 0.0);
}

TEST(LeviCivita, CovariantDerivativeLeibnizWithSharp) {
  // ∇(g⁻¹η) = g⁻¹∇η by metric compatibility.
  const Manifold m = bumpy(3, 0.05, 7);
  std::mt19937_64 rng(21);
  const OneFormField eta = random_one_form(3, rng);
  for (const auto& p : m.chart.sample(10, 8)) {
    const Mat<Jet1> g = evaluate_metric<Jet1>(m, p);
    const Mat<Jet1> gi = inverse_metric(g);
    const Vec<Jet1> e = evaluate_one_form<Jet1>(eta, p);
    Vec<Jet1> xi(3);
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 3; ++a) xi(k) += gi(k, a) * e(a);
    const Tensor<double, 3> G = christoffel<double>(evaluate_metric<Jet1>(m, p));
    const Mat<double> dxi = cov_deriv_vector(xi, G);
    const Mat<double> deta = cov_deriv_oneform(e, G);
    const Mat<double> giv = values(gi);
    Mat<double> raised(3);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 3; ++a) raised(i, k) += giv(k, a) * deta(i, a);
    EXPECT_LT(normalized_residual(dxi, raised), 1e-13);
  }
}
