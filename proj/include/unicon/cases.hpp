#pragma once

// The particular connections obtained by specializing (f₁, f₂, u, u₁, u₂, φ),
// each with its displayed reduced connection and ∇̃g law as executable
// checks. Reduced laws are evaluated from the raw bindings, not from H.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "unicon/curvature.hpp"

namespace unicon {

struct Bindings {
  std::map<std::string, ScalarField> scalars;                             // f1, f2
  std::map<std::string, std::shared_ptr<const OneFormField>> one_forms;  // u, u1, u2, omega
  std::map<std::string, std::shared_ptr<const EndoField>> endos;         // phi

  std::set<std::string> names() const {
    std::set<std::string> s;
    for (const auto& [k, v] : scalars) s.insert(k);
    for (const auto& [k, v] : one_forms) s.insert(k);
    for (const auto& [k, v] : endos) s.insert(k);
    return s;
  }
};

/// Values of the raw bindings at one point, used by the reduced laws.
struct CaseValues {
  int n = 0;
  Mat<double> g, ginv;
  double f1 = 0.0, f2 = 0.0;
  Vec<double> u, U, u1, U1, u2, U2, omega, B;
  Mat<double> phi_sym, phi_skew;  // ½(φ ± φ*) of the bound φ
  Mat<double> ricci, Q;           // Levi-Civita S and g⁻¹S
};

using ReducedConnection = std::function<Tensor<double, 3>(const CaseValues&)>;  // Γ̃ − Γ, layout (k, i, j)
using MetricityLaw = std::function<Tensor<double, 3>(const CaseValues&)>;       // (∇̃_i g)_{jk}

struct CasePreset {
  std::string id;
  std::string name;
  std::string reference;
  std::vector<std::string> required_bindings;
  std::string fixed_values;
  std::string connection_law;
  std::string metricity_law;
  bool expected_symmetric = false;
  bool metric_connection = false;
  bool requires_curved_manifold = false;
  /// The displayed ∇̃g coefficient contradicts the general metricity law;
  /// the residual is reported, not asserted.
  bool metricity_law_deviates = false;
  bool has_curvature_law = false;

  std::function<ConnectionSpec(const Bindings&, int n)> build;
  ReducedConnection reduced;
  MetricityLaw metricity;
};

namespace detail {

inline double kron(int a, int b) { return a == b ? 1.0 : 0.0; }

template <typename F>
Tensor<double, 3> tabulate3(int n, F&& f) {
  Tensor<double, 3> t(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) t(a, b, c) = f(a, b, c);
  return t;
}

inline double g_of(const Mat<double>& g, const Mat<double>& phi, int i, int j) {
  double s = 0.0;
  for (int m = 0; m < g.dim(); ++m) s += g(m, j) * phi(m, i);
  return s;
}

// Building blocks of the reduced laws, all in (k, i, j) layout with X = ∂_i, Y = ∂_j.
inline double u_y_phi_x(const Vec<double>& u, const Mat<double>& phi, int k, int i, int j) { return u(j) * phi(k, i); }
inline double u_x_phi_y(const Vec<double>& u, const Mat<double>& phi, int k, int i, int j) { return u(i) * phi(k, j); }
inline double brace(const CaseValues& v, const Vec<double>& w, const Vec<double>& W, int k, int i, int j) {
  return w(i) * kron(k, j) + w(j) * kron(k, i) - v.g(i, j) * W(k);
}

inline Tensor<double, 3> recurrent(const CaseValues& v, double c, const Vec<double>& w) {
  return tabulate3(v.n, [&](int i, int j, int k) { return c * w(i) * v.g(j, k); });
}
inline Tensor<double, 3> f2_law(const CaseValues& v, double c, const Vec<double>& w) {
  return tabulate3(v.n, [&](int i, int j, int k) { return c * (w(j) * v.g(i, k) + w(k) * v.g(i, j)); });
}
inline Tensor<double, 3> zero3(const CaseValues& v) { return Tensor<double, 3>(v.n); }

inline ScalarField constant(int n, double c) { return Polynomial::constant(n, c); }

inline std::shared_ptr<const OneFormField> zero_form(int n) {
  return std::make_shared<const OneFormField>(OneFormField::zero(n));
}
inline std::shared_ptr<const EndoField> sym(const Bindings& b) {
  return std::make_shared<const EndoField>(EndoField::symmetric_part(b.endos.at("phi")));
}
inline std::shared_ptr<const EndoField> skew(const Bindings& b) {
  return std::make_shared<const EndoField>(EndoField::skew_part(b.endos.at("phi")));
}
inline std::shared_ptr<const EndoField> id(int n) { return std::make_shared<const EndoField>(EndoField::identity(n)); }

inline ConnectionSpec spec_of(int n, ScalarField f1, ScalarField f2, std::shared_ptr<const OneFormField> u,
                              std::shared_ptr<const OneFormField> u1, std::shared_ptr<const OneFormField> u2,
                              std::shared_ptr<const EndoField> phi) {
  return {n, std::move(f1), std::move(f2), std::move(u), std::move(u1), std::move(u2), std::move(phi)};
}

inline std::vector<CasePreset> make_catalogue() {
  std::vector<CasePreset> c;
  auto F = [](const Bindings& b, const char* k) { return b.scalars.at(k); };
  auto W = [](const Bindings& b, const char* k) { return b.one_forms.at(k); };

  // u(Y)φ₁X − g(φ₁X,Y)U, the self-adjoint quarter-symmetric block.
  auto sym_block = [](const CaseValues& v, int k, int i, int j) {
    return u_y_phi_x(v.u, v.phi_sym, k, i, j) - g_of(v.g, v.phi_sym, i, j) * v.U(k);
  };
  auto skew_block = [](const CaseValues& v, int k, int i, int j) { return -u_x_phi_y(v.u, v.phi_skew, k, i, j); };
  auto semi_block = [](const CaseValues& v, int k, int i, int j) {
    return v.u(j) * kron(k, i) - v.g(i, j) * v.U(k);
  };

  c.push_back({"1", "quarter-symmetric metric connection", "Yano-Imai", {"u", "phi"}, "f1 = 0, f2 = 0",
               "u(Y)phi1 X - u(X)phi2 Y - g(phi1 X, Y)U", "nabla~ g = 0", false, true, false, false, false,
               [](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), Polynomial(n), b.one_forms.at("u"), zero_form(n), zero_form(n),
                                b.endos.at("phi"));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return sym_block(v, k, i, j) + skew_block(v, k, i, j); });
               },
               zero3});

  c.push_back({"2", "Ricci quarter-symmetric metric connection", "Mishra-Pandey", {"u"},
               "f1 = 0, f2 = 0, phi = Q (Ricci operator)", "u(Y)QX - S(X,Y)U", "nabla~ g = 0", false, true, true,
               false, false,
               [](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), Polynomial(n), b.one_forms.at("u"), zero_form(n), zero_form(n),
                                std::make_shared<const EndoField>(EndoField::ricci_operator(n)));
               },
               [](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return v.u(j) * v.Q(k, i) - v.ricci(i, j) * v.U(k); });
               },
               zero3});

  c.push_back({"2a", "quarter-symmetric metric connection with self-adjoint phi", "Mishra-Pandey", {"u", "phi"},
               "f1 = 0, f2 = 0, phi2 = 0", "u(Y)phi X - g(phi X, Y)U", "nabla~ g = 0", false, true, false, false,
               false,
               [](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), Polynomial(n), b.one_forms.at("u"), zero_form(n), zero_form(n),
                                sym(b));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return sym_block(v, k, i, j); });
               },
               zero3});

  c.push_back({"3", "semi-symmetric metric S-connection", "Yano-Imai; Ojha-Prasad", {"u", "phi"},
               "f1 = 0, f2 = 0, phi1 = 0", "-u(X)phi Y", "nabla~ g = 0", false, true, false, false, false,
               [](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), Polynomial(n), b.one_forms.at("u"), zero_form(n), zero_form(n),
                                skew(b));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return skew_block(v, k, i, j); });
               },
               zero3});

  c.push_back({"4", "quarter-symmetric recurrent-metric connection", "", {"f1", "u", "u1", "phi"},
               "f2 = 0, phi2 = 0", "u(Y)phi X - g(phi X,Y)U - f1{u1(X)Y + u1(Y)X - g(X,Y)U1}",
               "nabla~ g = 2 f1 u1 (x) g", false, false, false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, F(b, "f1"), Polynomial(n), W(b, "u"), W(b, "u1"), zero_form(n), sym(b));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) {
                   return sym_block(v, k, i, j) - v.f1 * brace(v, v.u1, v.U1, k, i, j);
                 });
               },
               [](const CaseValues& v) { return recurrent(v, 2.0 * v.f1, v.u1); }});

  c.push_back({"5", "special quarter-symmetric recurrent-metric connection", "", {"u", "phi"},
               "f1 = 1, f2 = 0, phi2 = 0, u1 = u", "u(Y)phi X - g(phi X,Y)U - u(X)Y - u(Y)X + g(X,Y)U",
               "nabla~ g = 2 u (x) g", false, false, false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, constant(n, 1.0), Polynomial(n), W(b, "u"), W(b, "u"), zero_form(n), sym(b));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return sym_block(v, k, i, j) - brace(v, v.u, v.U, k, i, j); });
               },
               [](const CaseValues& v) { return recurrent(v, 2.0, v.u); }});

  c.push_back({"6", "quarter-symmetric recurrent-metric connection", "", {"f1", "u", "u1", "phi"},
               "f2 = 0, phi1 = 0", "-u(X)phi Y - f1{u1(X)Y + u1(Y)X - g(X,Y)U1}", "nabla~ g = f1 u1 (x) g", false,
               false, false, true, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, F(b, "f1"), Polynomial(n), W(b, "u"), W(b, "u1"), zero_form(n), skew(b));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) {
                   return skew_block(v, k, i, j) - v.f1 * brace(v, v.u1, v.U1, k, i, j);
                 });
               },
               [](const CaseValues& v) { return recurrent(v, v.f1, v.u1); }});

  c.push_back({"7", "special quarter-symmetric recurrent-metric connection", "", {"u", "phi"},
               "f1 = 1, f2 = 0, phi1 = 0, u1 = u", "-u(X)phi Y - u(X)Y - u(Y)X + g(X,Y)U", "nabla~ g = 2 u (x) g",
               false, false, false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, constant(n, 1.0), Polynomial(n), W(b, "u"), W(b, "u"), zero_form(n), skew(b));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return skew_block(v, k, i, j) - brace(v, v.u, v.U, k, i, j); });
               },
               [](const CaseValues& v) { return recurrent(v, 2.0, v.u); }});

  c.push_back({"8", "quarter-symmetric non-metric connection", "", {"f2", "u", "u2", "phi"}, "f1 = 0, phi2 = 0",
               "u(Y)phi X - g(phi X,Y)U - f2 g(X,Y)U2", "f2{u2(Y)g(X,Z) + u2(Z)g(X,Y)}", false, false, false, false,
               false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), F(b, "f2"), W(b, "u"), zero_form(n), W(b, "u2"), sym(b));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return sym_block(v, k, i, j) - v.f2 * v.g(i, j) * v.U2(k); });
               },
               [](const CaseValues& v) { return f2_law(v, v.f2, v.u2); }});

  c.push_back({"9", "quarter-symmetric non-metric connection", "", {"f2", "u", "phi"}, "f1 = 0, phi2 = 0, u2 = u",
               "u(Y)phi X - g(phi X,Y)U - f2 g(X,Y)U", "f2{u(Y)g(X,Z) + u(Z)g(X,Y)}", false, false, false, false,
               false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), F(b, "f2"), W(b, "u"), zero_form(n), W(b, "u"), sym(b));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return sym_block(v, k, i, j) - v.f2 * v.g(i, j) * v.U(k); });
               },
               [](const CaseValues& v) { return f2_law(v, v.f2, v.u); }});

  c.push_back({"10", "quarter-symmetric non-metric connection", "", {"f2", "u", "u2", "phi"}, "f1 = 0, phi1 = 0",
               "-u(X)phi Y - f2 g(X,Y)U2", "f2{u2(Y)g(X,Z) + u2(Z)g(X,Y)}", false, false, false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), F(b, "f2"), W(b, "u"), zero_form(n), W(b, "u2"), skew(b));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return skew_block(v, k, i, j) - v.f2 * v.g(i, j) * v.U2(k); });
               },
               [](const CaseValues& v) { return f2_law(v, v.f2, v.u2); }});

  c.push_back({"11", "quarter-symmetric non-metric connection", "", {"f2", "u", "phi"}, "f1 = 0, phi1 = 0, u2 = u",
               "-u(X)phi Y - f2 g(X,Y)U", "f2{u(Y)g(X,Z) + u(Z)g(X,Y)}", false, false, false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), F(b, "f2"), W(b, "u"), zero_form(n), W(b, "u"), skew(b));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return skew_block(v, k, i, j) - v.f2 * v.g(i, j) * v.U(k); });
               },
               [](const CaseValues& v) { return f2_law(v, v.f2, v.u); }});

  c.push_back({"12", "semi-symmetric metric connection", "Yano 1970", {"u"}, "f1 = 0, f2 = 0, phi = Id",
               "u(Y)X - g(X,Y)U", "nabla~ g = 0", false, true, false, false, false,
               [](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), Polynomial(n), b.one_forms.at("u"), zero_form(n), zero_form(n), id(n));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return semi_block(v, k, i, j); });
               },
               zero3});

  c.push_back({"13", "semi-symmetric recurrent-metric connection", "", {"f1", "u", "u1"}, "f2 = 0, phi = Id",
               "u(Y)X - g(X,Y)U - f1{u1(X)Y + u1(Y)X - g(X,Y)U1}", "nabla~ g = f1 u1 (x) g", false, false, false,
               true, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, F(b, "f1"), Polynomial(n), W(b, "u"), W(b, "u1"), zero_form(n), id(n));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) {
                   return semi_block(v, k, i, j) - v.f1 * brace(v, v.u1, v.U1, k, i, j);
                 });
               },
               [](const CaseValues& v) { return recurrent(v, v.f1, v.u1); }});

  c.push_back({"13a", "semi-symmetric recurrent-metric connection", "Andonie-Smaranda; Liang", {"u", "u1"},
               "f1 = 1, f2 = 0, phi = Id", "u(Y)X - g(X,Y)U - u1(X)Y - u1(Y)X + g(X,Y)U1", "nabla~ g = 2 u1 (x) g",
               false, false, false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, constant(n, 1.0), Polynomial(n), W(b, "u"), W(b, "u1"), zero_form(n), id(n));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return semi_block(v, k, i, j) - brace(v, v.u1, v.U1, k, i, j); });
               },
               [](const CaseValues& v) { return recurrent(v, 2.0, v.u1); }});

  c.push_back({"13b", "semi-symmetric recurrent-metric connection", "", {"u"}, "f1 = 1, f2 = 0, phi = Id, u1 = u",
               "-u(X)Y", "nabla~ g = 2 u (x) g", false, false, false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, constant(n, 1.0), Polynomial(n), W(b, "u"), W(b, "u"), zero_form(n), id(n));
               },
               [](const CaseValues& v) { return tabulate3(v.n, [&](int k, int i, int j) { return -v.u(i) * kron(k, j); }); },
               [](const CaseValues& v) { return recurrent(v, 2.0, v.u); }});

  c.push_back({"14", "semi-symmetric non-metric connection", "", {"f2", "u", "u2"}, "f1 = 0, phi = Id",
               "u(Y)X - g(X,Y)U - f2 g(X,Y)U2", "f2{u2(Y)g(X,Z) + u2(Z)g(X,Y)}", false, false, false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), F(b, "f2"), W(b, "u"), zero_form(n), W(b, "u2"), id(n));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return semi_block(v, k, i, j) - v.f2 * v.g(i, j) * v.U2(k); });
               },
               [](const CaseValues& v) { return f2_law(v, v.f2, v.u2); }});

  c.push_back({"14a", "semi-symmetric non-metric connection", "Sengupta-De-Binh", {"u", "u2"},
               "f1 = 0, f2 = -1, phi = Id", "u(Y)X - g(X,Y)U + g(X,Y)U2", "-u2(Y)g(X,Z) - u2(Z)g(X,Y)", false, false,
               false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), constant(n, -1.0), W(b, "u"), zero_form(n), W(b, "u2"), id(n));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return semi_block(v, k, i, j) + v.g(i, j) * v.U2(k); });
               },
               [](const CaseValues& v) { return f2_law(v, -1.0, v.u2); }});

  c.push_back({"14b", "semi-symmetric non-metric connection", "Agashe-Chafle", {"u"},
               "f1 = 0, f2 = -1, phi = Id, u2 = u", "u(Y)X", "-u(Y)g(X,Z) - u(Z)g(X,Y)", false, false, false, false,
               false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, Polynomial(n), constant(n, -1.0), W(b, "u"), zero_form(n), W(b, "u"), id(n));
               },
               [](const CaseValues& v) { return tabulate3(v.n, [&](int k, int i, int j) { return v.u(j) * kron(k, i); }); },
               [](const CaseValues& v) { return f2_law(v, -1.0, v.u); }});

  c.push_back({"15", "symmetric non-metric connection", "", {"f1", "f2", "u1", "u2"}, "u = 0",
               "-f1{u1(X)Y + u1(Y)X - g(X,Y)U1} - f2 g(X,Y)U2",
               "2 f1 u1(X)g(Y,Z) + f2{u2(Y)g(X,Z) + u2(Z)g(X,Y)}", true, false, false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, F(b, "f1"), F(b, "f2"), zero_form(n), W(b, "u1"), W(b, "u2"), id(n));
               },
               [=](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) {
                   return -v.f1 * brace(v, v.u1, v.U1, k, i, j) - v.f2 * v.g(i, j) * v.U2(k);
                 });
               },
               [](const CaseValues& v) { return recurrent(v, 2.0 * v.f1, v.u1) + f2_law(v, v.f2, v.u2); }});

  c.push_back({"16", "Weyl connection", "Folland 1970", {"omega"}, "u = 0, f1 = 1/2, f2 = 0, u1 = omega",
               "-1/2{omega(X)Y + omega(Y)X - g(X,Y)B}", "nabla~ g = omega (x) g", true, false, false, false, false,
               [=](const Bindings& b, int n) {
                 return spec_of(n, constant(n, 0.5), Polynomial(n), zero_form(n), W(b, "omega"), zero_form(n), id(n));
               },
               [](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return -0.5 * brace(v, v.omega, v.B, k, i, j); });
               },
               [](const CaseValues& v) { return recurrent(v, 1.0, v.omega); }});

  c.push_back({"17", "symmetric non-metric connection projectively related to Levi-Civita",
               "Yano 1970; Smaranda 1983", {"omega"}, "u = 0, f1 = -1, f2 = -1, u1 = u2 = omega",
               "omega(X)Y + omega(Y)X", "-2 omega(X)g(Y,Z) - omega(Y)g(X,Z) - omega(Z)g(X,Y)", true, false, false,
               false, true,
               [=](const Bindings& b, int n) {
                 return spec_of(n, constant(n, -1.0), constant(n, -1.0), zero_form(n), W(b, "omega"), W(b, "omega"),
                                id(n));
               },
               [](const CaseValues& v) {
                 return tabulate3(v.n, [&](int k, int i, int j) { return v.omega(i) * kron(k, j) + v.omega(j) * kron(k, i); });
               },
               [](const CaseValues& v) { return recurrent(v, -2.0, v.omega) + f2_law(v, -1.0, v.omega); }});
  return c;
}

}  // namespace detail

inline const std::vector<CasePreset>& case_catalogue() {
  static const std::vector<CasePreset> catalogue = detail::make_catalogue();
  return catalogue;
}

inline const CasePreset& find_case(std::string_view id) {
  for (const auto& c : case_catalogue())
    if (c.id == id) return c;
  throw CaseUnknown("unknown case '" + std::string(id) + "'");
}

inline bool is_flat_preset(const Manifold& m) { return std::holds_alternative<EuclideanMetric>(m.metric.kind); }

inline ConnectionSpec build_case(std::string_view id, const Bindings& b, const Manifold& m) {
  const CasePreset& c = find_case(id);
  const std::set<std::string> have = b.names();
  for (const auto& r : c.required_bindings)
    if (!have.contains(r)) throw MissingBinding("case " + c.id + " requires binding '" + r + "'");
  for (const auto& h : have)
    if (std::find(c.required_bindings.begin(), c.required_bindings.end(), h) == c.required_bindings.end())
      throw ExtraBinding("case " + c.id + " does not take binding '" + h + "'");
  if (c.requires_curved_manifold && is_flat_preset(m)) {
    throw BadParams("case " + c.id + " needs a curved manifold (Q vanishes on flat space)");
  }
  ConnectionSpec s = c.build(b, m.chart.dim);
  s.validate();
  if (s.n != m.chart.dim) throw DimensionMismatch("bindings do not match the manifold dimension");
  return s;
}

/// Random cubic-polynomial bindings for every field the case requires.
inline Bindings random_bindings(const CasePreset& c, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bindings b;
  for (const auto& r : c.required_bindings) {
    if (r == "f1" || r == "f2") {
      b.scalars[r] = random_scalar(n, rng);
    } else if (r == "phi") {
      b.endos[r] = std::make_shared<const EndoField>(random_endo(n, rng));
    } else {
      b.one_forms[r] = std::make_shared<const OneFormField>(random_one_form(n, rng));
    }
  }
  return b;
}

inline CaseValues case_values(const CasePreset& c, const Bindings& b, const Manifold& m, std::span<const double> p) {
  CaseValues v;
  v.n = m.chart.dim;
  const int n = v.n;
  const Mat<Jet2> gj = evaluate_metric<Jet2>(m, p);
  v.g = values(gj);
  v.ginv = inverse_metric(v.g);
  auto form = [&](const char* name) {
    const auto it = b.one_forms.find(name);
    return it == b.one_forms.end() ? Vec<double>(n) : evaluate_one_form<double>(*it->second, p);
  };
  auto scalar = [&](const char* name) {
    const auto it = b.scalars.find(name);
    return it == b.scalars.end() ? 0.0 : evaluate_scalar<double>(it->second, p);
  };
  v.f1 = scalar("f1");
  v.f2 = scalar("f2");
  v.u = form("u");
  v.u1 = form("u1");
  v.u2 = form("u2");
  v.omega = form("omega");
  v.U = sharp(v.u, v.ginv);
  v.U1 = sharp(v.u1, v.ginv);
  v.U2 = sharp(v.u2, v.ginv);
  v.B = sharp(v.omega, v.ginv);
  v.phi_sym = Mat<double>(n);
  v.phi_skew = Mat<double>(n);
  if (const auto it = b.endos.find("phi"); it != b.endos.end()) {
    const Mat<double> phi = evaluate_endo<double>(*it->second, m, p);
    const Mat<double> adj = matmul(matmul(v.ginv, transpose(phi)), v.g);
    for (int a = 0; a < n; ++a)
      for (int bb = 0; bb < n; ++bb) {
        v.phi_sym(a, bb) = 0.5 * (phi(a, bb) + adj(a, bb));
        v.phi_skew(a, bb) = 0.5 * (phi(a, bb) - adj(a, bb));
      }
  }
  if (c.requires_curved_manifold) {
    v.ricci = ricci_tensor(riemann<double>(christoffel<Jet1>(gj)));
    v.Q = matmul(v.ginv, v.ricci);
  }
  return v;
}

// ---------------------------------------------------------------------------

struct NamedResidual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool asserted = true;
  bool passed() const { return !asserted || value < tolerance; }
};

struct CaseCheckResult {
  std::string id;
  std::vector<NamedResidual> checks;
  bool pass = true;
};

struct CaseTolerances {
  double connection = 1e-10;
  double metricity = 1e-10;
  double torsion = 1e-10;
  double curvature_law = 1e-10;
  double curvature_oracle = 1e-8;
  double s_skew = 1e-12;
};

/// max|a − b| / max(1, |a|, |b|, scale).
template <std::size_t R>
double residual_with_scale(const Tensor<double, R>& a, const Tensor<double, R>& b, double scale) {
  return max_abs_diff(a, b) / std::max({1.0, max_abs(a), max_abs(b), scale});
}

/// s(i, j) = (∇_i ω)_j − ω_i ω_j.
inline Mat<double> projective_s(const Vec<Jet1>& omega, const Tensor<double, 3>& gamma) {
  Mat<double> s = cov_deriv_oneform(omega, gamma);
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) s(i, j) -= omega(i).v * omega(j).v;
  return s;
}

/// R + s(X,Z)Y − s(Y,Z)X + {s(X,Y) − s(Y,X)}Z.
inline Tensor<double, 4> projective_curvature(const Tensor<double, 4>& r, const Mat<double>& s) {
  const int n = r.dim();
  Tensor<double, 4> out = r;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out(l, i, j, k) += s(i, k) * detail::kron(l, j) - s(j, k) * detail::kron(l, i) +
                             (s(i, j) - s(j, i)) * detail::kron(l, k);
  return out;
}

/// Runs every law attached to the case at each point and keeps the worst
/// residual per law.
inline CaseCheckResult verify_case(std::string_view id, const Bindings& b, const Manifold& m,
                                   const std::vector<std::vector<double>>& points, const CaseTolerances& tol = {},
                                   const HTermWeights& hw = kUnitHWeights) {
  const CasePreset& c = find_case(id);
  const ConnectionSpec spec = build_case(id, b, m);
  std::map<std::string, NamedResidual> worst;
  auto record = [&](const std::string& name, double value, double tolerance, bool asserted = true) {
    auto [it, inserted] = worst.try_emplace(name, NamedResidual{name, value, tolerance, asserted});
    if (!inserted) it->second.value = std::max(it->second.value, value);
  };

  for (const auto& p : points) {
    const PointFrame<double> fr = point_frame<double>(spec, m, p, hw);
    const CaseValues v = case_values(c, b, m, p);
    const Tensor<double, 3> reduced = c.reduced(v);
    record("connection_reduced_vs_general", normalized_residual(fr.h, reduced), tol.connection);

    const auto tor = torsion(fr);
    const auto nm = nonmetricity(fr);
    record("torsion_general_law", tor.residual, tol.torsion);
    record("metricity_general_law", nm.residual, tol.metricity);

    const double conn_scale = max_abs(values(fr.gamma_tilde)) * std::max(1.0, max_abs(fr.fields.g));
    const Tensor<double, 3> stated = c.metricity(v);
    record("metricity_stated_law", residual_with_scale(nm.direct, stated, conn_scale), tol.metricity,
           !c.metricity_law_deviates);
    if (c.metric_connection) {
      record("metricity_zero", residual_with_scale(nm.direct, Tensor<double, 3>(v.n), conn_scale), tol.metricity);
    }
    if (c.expected_symmetric) {
      record("torsion_zero", residual_with_scale(tor.direct, Tensor<double, 3>(v.n), max_abs(fr.h)), tol.torsion);
    }
    if (c.requires_curved_manifold) {
      const Tensor<double, 3> law = detail::tabulate3(
          v.n, [&](int k, int i, int j) { return v.u(j) * v.Q(k, i) - v.u(i) * v.Q(k, j); });
      record("torsion_stated_law", normalized_residual(tor.direct, law), tol.torsion);
    }
    if (c.has_curvature_law) {
      const FormulaContext ctx = formula_context(spec, m, p);
      const Tensor<double, 4> formula = curvature_formula(ctx).total;
      const Tensor<double, 4> direct = curvature_direct(spec, m, p, hw);
      const Vec<Jet1> omega = evaluate_one_form<Jet1>(*b.one_forms.at("omega"), p);
      const Mat<double> s = projective_s(omega, ctx.gamma);
      const Tensor<double, 4> law = projective_curvature(ctx.riemann, s);
      record("curvature_formula_vs_stated_law", normalized_residual(formula, law), tol.curvature_law);
      record("curvature_stated_law_vs_direct", normalized_residual(law, direct), tol.curvature_oracle);
      const Mat<double> two_domega = exterior_2du(omega);
      Mat<double> skew_s(v.n);
      for (int i = 0; i < v.n; ++i)
        for (int j = 0; j < v.n; ++j) skew_s(i, j) = s(i, j) - s(j, i);
      record("s_skew_equals_2domega", normalized_residual(skew_s, two_domega), tol.s_skew);
    }
  }

  CaseCheckResult out{c.id, {}, true};
  for (auto& [name, r] : worst) {
    out.pass = out.pass && r.passed();
    out.checks.push_back(r);
  }
  return out;
}

}  // namespace unicon
