#pragma once

// Riemannian baseline: inverse metric, Christoffel symbols, curvature, Ricci
// data and Levi-Civita covariant derivatives.
//
// Conventions (used everywhere in the library):
//   gamma(k, i, j) = Γ^k_{ij},   ∇_{∂_i} ∂_j = Γ^k_{ij} ∂_k
//   r(l, i, j, k)  = R^l_{ijk},  R(∂_i, ∂_j) ∂_k = R^l_{ijk} ∂_l
//   S_{jk} = R^m_{mjk},  Q^i_j = g^{im} S_{mj}
//
// Every routine is generic over the scalar type: feeding jets in returns
// jets out, which is how higher partials (∂Γ, ∂Q) are obtained exactly.

#include <Eigen/Dense>

#include <string>

#include "unicon/errors.hpp"
#include "unicon/tensor.hpp"

namespace unicon {

/// Γ together with its first partials, gamma(k, i, j).d[l] = ∂_l Γ^k_{ij}.
using ChristoffelJet = Tensor<Jet1, 3>;

inline void require_positive_definite(const Mat<double>& g) {
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 1e-10 * hi) || !(hi > 0.0)) {
    throw MetricNotPositiveDefinite("metric is not positive definite (eigenvalues " + std::to_string(lo) + ", " +
                                    std::to_string(hi) + ")");
  }
}

inline Mat<double> inverse_metric(const Mat<double>& g) {
  require_positive_definite(g);
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
  const Eigen::MatrixXd inv = m.llt().solve(Eigen::MatrixXd::Identity(n, n));
  Mat<double> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = 0.5 * (inv(i, j) + inv(j, i));
  return out;
}

/// g⁻¹ with partials from ∂(g⁻¹) = −g⁻¹ (∂g) g⁻¹, applied level by level.
template <typename T>
Mat<Jet<T>> inverse_metric(const Mat<Jet<T>>& g) {
  const int n = g.dim();
  const Mat<T> inv = inverse_metric(truncate(g));
  Mat<Jet<T>> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j).v = inv(i, j);
  for (int a = 0; a < n; ++a) {
    const Mat<T> dinv = matmul(matmul(inv, partial(g, a)), inv);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j).d[static_cast<std::size_t>(a)] = -dinv(i, j);
  }
  return out;
}

/// Γ^k_{ij} = ½ g^{km} (∂_i g_{mj} + ∂_j g_{mi} − ∂_m g_{ij}), one derivative
/// level below the metric jet.
template <Scalar S>
Tensor<S, 3> christoffel(const Mat<Jet<S>>& g) {
  const int n = g.dim();
  const Mat<S> ginv = inverse_metric(truncate(g));
  std::vector<Mat<S>> dg;
  dg.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) dg.push_back(partial(g, a));

  Tensor<S, 3> lowered(n);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S v = (dg[i](m, j) + dg[j](m, i) - dg[m](i, j)) * 0.5;
        lowered(m, j, i) = v;
        lowered(m, i, j) = std::move(v);
      }

  Tensor<S, 3> gamma(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S acc{};
        for (int m = 0; m < n; ++m) acc += ginv(k, m) * lowered(m, i, j);
        gamma(k, j, i) = acc;
        gamma(k, i, j) = std::move(acc);
      }
  return gamma;
}

/// R^l_{ijk} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im} Γ^m_{jk} − Γ^l_{jm} Γ^m_{ik}.
/// Coordinate frame, so no bracket term. Works for any connection
/// coefficients, symmetric or not.
template <Scalar S>
Tensor<S, 4> riemann(const Tensor<Jet<S>, 3>& gamma) {
  const int n = gamma.dim();
  const Tensor<S, 3> g0 = truncate(gamma);
  Tensor<S, 4> r(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          S acc = gamma(l, j, k).d[static_cast<std::size_t>(i)] - gamma(l, i, k).d[static_cast<std::size_t>(j)];
          for (int m = 0; m < n; ++m) acc += g0(l, i, m) * g0(m, j, k) - g0(l, j, m) * g0(m, i, k);
          r(l, j, i, k) = -acc;
          r(l, i, j, k) = std::move(acc);
        }
  return r;
}

/// S_{jk} = R^m_{mjk}.
template <Scalar S>
Mat<S> ricci_tensor(const Tensor<S, 4>& r) {
  const int n = r.dim();
  Mat<S> s(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) s(j, k) += r(m, m, j, k);
  return s;
}

/// Q = g⁻¹ S at scalar level S; needs the metric two jet levels higher.
template <Scalar S>
Mat<S> ricci_operator(const Mat<Jet<Jet<S>>>& g) {
  const Tensor<Jet<S>, 3> gamma = christoffel<Jet<S>>(g);
  const Mat<S> ric = ricci_tensor(riemann<S>(gamma));
  const Mat<S> ginv = inverse_metric(truncate(truncate(g)));
  return matmul(ginv, ric);
}

struct RicciData {
  Mat<double> s;
  Mat<double> q;
  Tensor<double, 3> q_d1;  // q_d1(i, j, k) = ∂_k Q^i_j
};

inline RicciData ricci_data(const Mat<Jet3>& g) {
  const int n = g.dim();
  const Tensor<Jet1, 3> gamma = christoffel<Jet1>(truncate(g));
  RicciData out;
  out.s = ricci_tensor(riemann<double>(gamma));
  const Mat<Jet1> q = ricci_operator<Jet1>(g);
  out.q = values(q);
  out.q_d1 = Tensor<double, 3>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.q_d1(i, j, k) = q(i, j).d[static_cast<std::size_t>(k)];
  return out;
}

/// out(i, j) = (∇_i η)_j = ∂_i η_j − Γ^m_{ij} η_m.
inline Mat<double> cov_deriv_oneform(const Vec<Jet1>& eta, const Tensor<double, 3>& gamma) {
  const int n = eta.dim();
  Mat<double> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = eta(j).d[static_cast<std::size_t>(i)];
      for (int m = 0; m < n; ++m) acc -= gamma(m, i, j) * eta(m).v;
      out(i, j) = acc;
    }
  return out;
}

/// out(i, k) = (∇_i ξ)^k = ∂_i ξ^k + Γ^k_{im} ξ^m.
inline Mat<double> cov_deriv_vector(const Vec<Jet1>& xi, const Tensor<double, 3>& gamma) {
  const int n = xi.dim();
  Mat<double> out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double acc = xi(k).d[static_cast<std::size_t>(i)];
      for (int m = 0; m < n; ++m) acc += gamma(k, i, m) * xi(m).v;
      out(i, k) = acc;
    }
  return out;
}

/// out(i, k, j) = (∇_i φ)^k_j = ∂_i φ^k_j + Γ^k_{im} φ^m_j − Γ^m_{ij} φ^k_m,
/// with phi(k, j) = φ^k_j.
inline Tensor<double, 3> cov_deriv_endo(const Mat<Jet1>& phi, const Tensor<double, 3>& gamma) {
  const int n = phi.dim();
  Tensor<double, 3> out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double acc = phi(k, j).d[static_cast<std::size_t>(i)];
        for (int m = 0; m < n; ++m) acc += gamma(k, i, m) * phi(m, j).v - gamma(m, i, j) * phi(k, m).v;
        out(i, k, j) = acc;
      }
  return out;
}

}  // namespace unicon
