// Shared hand fixtures for the unit suites.
#pragma once

#include <memory>

#include "unicon/connection.hpp"

namespace unicon::testing {

inline Polynomial x(int n, int i) { return Polynomial::coordinate(n, i); }

inline std::shared_ptr<const OneFormField> form(std::vector<Polynomial> comps) {
  return std::make_shared<const OneFormField>(OneFormField{std::move(comps)});
}

inline std::shared_ptr<const EndoField> endo(EndoField e) { return std::make_shared<const EndoField>(std::move(e)); }

inline std::shared_ptr<const EndoField> endo(int n, std::vector<Polynomial> comps) {
  return endo(EndoField{n, PolynomialEndo{std::move(comps)}});
}

/// φ = Id, f₁ = f₂ = 0, u = x¹dx²; evaluated at (1, 0).
inline ConnectionSpec e1_spec() {
  ConnectionSpec s = ConnectionSpec::zero(2);
  s.u = form({Polynomial(2), x(2, 0)});
  s.phi = endo(EndoField::identity(2));
  return s;
}

/// u = 0, f₁ = f₂ = −1, u₁ = u₂ = x²dx¹; evaluated at (0, 1).
inline ConnectionSpec e2_spec() {
  ConnectionSpec s = ConnectionSpec::zero(2);
  s.f1 = Polynomial::constant(2, -1.0);
  s.f2 = Polynomial::constant(2, -1.0);
  s.u1 = form({x(2, 1), Polynomial(2)});
  s.u2 = s.u1;
  return s;
}

inline const std::vector<double> kE1Point = {1.0, 0.0};
inline const std::vector<double> kE2Point = {0.0, 1.0};

}  // namespace unicon::testing
