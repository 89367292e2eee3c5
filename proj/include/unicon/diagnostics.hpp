#pragma once

// Point sweeps, fault injection and the ablation machinery that attributes a
// failing residual to a named H term or curvature term group.

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unicon/cases.hpp"

namespace unicon {

struct Tolerances {
  double torsion = 1e-10;
  double metricity = 1e-10;
  double transpose = 1e-10;
  double antisymmetry = 1e-10;
  double curvature = 1e-8;
  CaseTolerances cases;

  /// One value for every check, including the case laws.
  void set_all(double x) {
    torsion = metricity = transpose = antisymmetry = curvature = x;
    cases = {x, x, x, x, x, x};
  }
};

/// Weights applied to H and to the closed-form groups. A corrupted term is
/// flipped to weight −1, which changes the result by twice that term.
struct Corruption {
  std::string name;
  HTermWeights h = kUnitHWeights;
  TermGroupWeights groups = kUnitGroupWeights;
  bool active() const { return !name.empty(); }
};

inline std::vector<std::string> corruptible_terms() {
  std::vector<std::string> out(kHTermNames.begin(), kHTermNames.end());
  out.insert(out.end(), kTermGroupNames.begin(), kTermGroupNames.end());
  return out;
}

inline Corruption corruption_for(std::string_view name) {
  Corruption c;
  if (name.empty()) return c;
  c.name = std::string(name);
  for (std::size_t t = 0; t < kHTermNames.size(); ++t)
    if (kHTermNames[t] == name) {
      c.h[t] = -1.0;
      return c;
    }
  for (std::size_t t = 0; t < kTermGroupNames.size(); ++t)
    if (kTermGroupNames[t] == name) {
      c.groups[t] = -1.0;
      return c;
    }
  throw BadParams("unknown term '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Per point.

struct PointEvaluation {
  PointFrame<double> frame;
  TensorCheck<3> torsion, nonmetricity, transpose;
  CurvatureFormula formula;
  Tensor<double, 4> direct;
  double curvature_residual = 0.0;
  double antisymmetry_formula = 0.0;
  double antisymmetry_direct = 0.0;
};

inline PointEvaluation evaluate_point(const ConnectionSpec& spec, const Manifold& m, std::span<const double> p,
                                      const Corruption& c = {}) {
  PointEvaluation e;
  e.frame = point_frame<double>(spec, m, p, c.h);
  e.torsion = torsion(e.frame);
  e.nonmetricity = nonmetricity(e.frame);
  e.transpose = transpose_torsion(e.frame);
  e.formula = curvature_formula(formula_context(spec, m, p), c.groups);
  e.direct = curvature_direct(spec, m, p, c.h);
  e.curvature_residual = normalized_residual(e.formula.total, e.direct);
  e.antisymmetry_formula = antisymmetry_residual(e.formula.total);
  e.antisymmetry_direct = antisymmetry_residual(e.direct);
  return e;
}

struct CurvatureReport {
  std::vector<double> point;
  Tensor<double, 4> formula;
  Tensor<double, 4> direct;
  double residual = 0.0;
  std::array<double, kTermGroupCount> term_contributions{};  // max-abs of each weighted group
};

inline std::vector<CurvatureReport> compare_curvature(const ConnectionSpec& spec, const Manifold& m,
                                                      const std::vector<std::vector<double>>& points,
                                                      const Corruption& c = {}) {
  std::vector<CurvatureReport> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    CurvatureReport r;
    r.point = p;
    const CurvatureFormula f = curvature_formula(formula_context(spec, m, p), c.groups);
    r.formula = f.total;
    r.direct = curvature_direct(spec, m, p, c.h);
    r.residual = normalized_residual(r.formula, r.direct);
    for (std::size_t g = 0; g < kTermGroupCount; ++g) r.term_contributions[g] = std::abs(c.groups[g]) * max_abs(f.groups[g]);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweep summary.

struct SweepResult {
  std::vector<std::vector<double>> points;
  std::vector<std::array<double, 6>> per_point;  // order of kSweepChecks
  std::array<double, 6> worst{};
  std::array<std::size_t, 6> worst_index{};
};

inline constexpr std::array<std::string_view, 6> kSweepChecks = {
    "torsion", "metricity", "transpose_torsion", "antisymmetry_formula", "antisymmetry_direct", "curvature"};

inline std::array<double, 6> sweep_tolerances(const Tolerances& t) {
  return {t.torsion, t.metricity, t.transpose, t.antisymmetry, t.antisymmetry, t.curvature};
}

inline SweepResult sweep(const ConnectionSpec& spec, const Manifold& m, const std::vector<std::vector<double>>& points,
                         const Corruption& c = {}) {
  SweepResult s;
  s.points = points;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const PointEvaluation e = evaluate_point(spec, m, points[k], c);
    const std::array<double, 6> r = {e.torsion.residual,     e.nonmetricity.residual, e.transpose.residual,
                                     e.antisymmetry_formula, e.antisymmetry_direct,   e.curvature_residual};
    for (std::size_t q = 0; q < r.size(); ++q)
      if (k == 0 || r[q] > s.worst[q]) {
        s.worst[q] = r[q];
        s.worst_index[q] = k;
      }
    s.per_point.push_back(r);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Ablation.

enum class Stage { kNone, kConnection, kCurvature };

inline std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::kConnection:
      return "connection";
    case Stage::kCurvature:
      return "curvature";
    default:
      return "none";
  }
}

inline Stage failing_stage(const SweepResult& s, const Tolerances& t) {
  if (s.worst[0] >= t.torsion || s.worst[1] >= t.metricity || s.worst[2] >= t.transpose) return Stage::kConnection;
  if (s.worst[3] >= t.antisymmetry || s.worst[4] >= t.antisymmetry || s.worst[5] >= t.curvature)
    return Stage::kCurvature;
  return Stage::kNone;
}

struct AblationRow {
  std::string name;
  Stage stage = Stage::kNone;
  double max_abs = 0.0;    // largest weighted contribution over the points
  double explained = 0.0;  // cos² between the contribution and the discrepancy
};

struct AblationTable {
  std::vector<AblationRow> rows;
  Stage failing = Stage::kNone;
  std::string dominant;  // empty when nothing fails
  double connection_discrepancy = 0.0;
  double curvature_discrepancy = 0.0;
};

namespace detail {

struct Fit {
  double dd = 0.0, dc = 0.0, cc = 0.0;
  void add(std::span<const double> d, std::span<const double> c) {
    for (std::size_t k = 0; k < d.size(); ++k) {
      dd += d[k] * d[k];
      dc += d[k] * c[k];
      cc += c[k] * c[k];
    }
  }
  double cos2() const { return dd > 0.0 && cc > 0.0 ? dc * dc / (dd * cc) : 0.0; }
};

inline std::vector<double> concat(const Tensor<double, 3>& a, const Tensor<double, 3>& b) {
  std::vector<double> v(a.flat().begin(), a.flat().end());
  v.insert(v.end(), b.flat().begin(), b.flat().end());
  return v;
}

/// Non-metricity produced by adding `h` to a connection: −h^m_ij g_mk − h^m_ik g_jm.
inline Tensor<double, 3> nonmetricity_shift(const Tensor<double, 3>& h, const Mat<double>& g) {
  const int n = g.dim();
  Tensor<double, 3> q(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) q(i, j, k) -= h(m, i, j) * g(m, k) + h(m, i, k) * g(j, m);
  return q;
}

}  // namespace detail

inline AblationTable ablation_table(const ConnectionSpec& spec, const Manifold& m,
                                    const std::vector<std::vector<double>>& points, const Corruption& c,
                                    const Tolerances& tol) {
  AblationTable t;
  t.failing = failing_stage(sweep(spec, m, points, c), tol);
  std::array<detail::Fit, kHTermCount> hfit{};
  std::array<detail::Fit, kTermGroupCount> gfit{};
  std::array<double, kHTermCount> hmax{};
  std::array<double, kTermGroupCount> gmax{};

  for (const auto& p : points) {
    const PointEvaluation e = evaluate_point(spec, m, p, c);
    const auto terms = deformation_terms(e.frame.fields);
    const std::vector<double> dconn = detail::concat(e.torsion.direct - e.torsion.predicted,
                                                     e.nonmetricity.direct - e.nonmetricity.predicted);
    t.connection_discrepancy = std::max(t.connection_discrepancy, std::max(e.torsion.residual, e.nonmetricity.residual));
    for (std::size_t k = 0; k < kHTermCount; ++k) {
      const auto contrib = detail::concat(torsion_of(terms[k]), detail::nonmetricity_shift(terms[k], e.frame.fields.g));
      hfit[k].add(dconn, contrib);
      hmax[k] = std::max(hmax[k], std::abs(c.h[k]) * max_abs(terms[k]));
    }
    const Tensor<double, 4> dcurv = e.direct - e.formula.total;
    t.curvature_discrepancy = std::max(t.curvature_discrepancy, e.curvature_residual);
    for (std::size_t g = 0; g < kTermGroupCount; ++g) {
      gfit[g].add(dcurv.flat(), e.formula.groups[g].flat());
      gmax[g] = std::max(gmax[g], std::abs(c.groups[g]) * max_abs(e.formula.groups[g]));
    }
  }

  for (std::size_t k = 0; k < kHTermCount; ++k)
    t.rows.push_back({std::string(kHTermNames[k]), Stage::kConnection, hmax[k], hfit[k].cos2()});
  for (std::size_t g = 0; g < kTermGroupCount; ++g)
    t.rows.push_back({std::string(kTermGroupNames[g]), Stage::kCurvature, gmax[g], gfit[g].cos2()});

  if (t.failing != Stage::kNone) {
    const AblationRow* best = nullptr;
    for (const auto& r : t.rows)
      if (r.stage == t.failing && (best == nullptr || r.explained > best->explained)) best = &r;
    if (best != nullptr && best->explained > 0.0) t.dominant = best->name;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Minimal failing configuration: zero bindings greedily while the failure
// survives.

inline constexpr std::array<std::string_view, 6> kBindingNames = {"f1", "f2", "u", "u1", "u2", "phi"};

inline bool binding_is_zero(const ConnectionSpec& s, std::string_view name) {
  auto form_zero = [](const OneFormField& f) {
    return std::all_of(f.comps.begin(), f.comps.end(), [](const Polynomial& p) { return p.is_zero(); });
  };
  if (name == "f1") return s.f1.is_zero();
  if (name == "f2") return s.f2.is_zero();
  if (name == "u") return form_zero(*s.u);
  if (name == "u1") return form_zero(*s.u1);
  if (name == "u2") return form_zero(*s.u2);
  return s.phi->is_zero();
}

inline ConnectionSpec with_binding_zeroed(ConnectionSpec s, std::string_view name) {
  const auto zero_form = std::make_shared<const OneFormField>(OneFormField::zero(s.n));
  if (name == "f1") s.f1 = Polynomial(s.n);
  else if (name == "f2") s.f2 = Polynomial(s.n);
  else if (name == "u") s.u = zero_form;
  else if (name == "u1") s.u1 = zero_form;
  else if (name == "u2") s.u2 = zero_form;
  else if (name == "phi") s.phi = std::make_shared<const EndoField>(EndoField::zero(s.n));
  else throw BadParams("unknown binding '" + std::string(name) + "'");
  return s;
}

struct SearchStep {
  std::string zeroed;
  double residual = 0.0;
  bool still_fails = false;
};

struct MinimalFailure {
  Stage stage = Stage::kNone;
  std::vector<SearchStep> steps;
  std::vector<std::string> remaining;  // bindings still nonzero in the minimal spec
  ConnectionSpec spec;
  double residual = 0.0;
};

inline double stage_residual(const SweepResult& s, Stage stage) {
  if (stage == Stage::kConnection) return std::max({s.worst[0], s.worst[1], s.worst[2]});
  return std::max({s.worst[3], s.worst[4], s.worst[5]});
}

inline double stage_tolerance(const Tolerances& t, Stage stage) {
  return stage == Stage::kConnection ? std::min({t.torsion, t.metricity, t.transpose})
                                     : std::min(t.antisymmetry, t.curvature);
}

inline std::optional<MinimalFailure> minimal_failure(const ConnectionSpec& spec, const Manifold& m,
                                                     const std::vector<std::vector<double>>& points,
                                                     const Corruption& c, const Tolerances& tol) {
  const Stage stage = failing_stage(sweep(spec, m, points, c), tol);
  if (stage == Stage::kNone) return std::nullopt;
  const double limit = stage_tolerance(tol, stage);
  MinimalFailure out;
  out.stage = stage;
  out.spec = spec;
  out.residual = stage_residual(sweep(spec, m, points, c), stage);
  for (std::string_view name : kBindingNames) {
    if (binding_is_zero(out.spec, name)) continue;
    const ConnectionSpec trial = with_binding_zeroed(out.spec, name);
    const double r = stage_residual(sweep(trial, m, points, c), stage);
    const bool fails = r >= limit;
    out.steps.push_back({std::string(name), r, fails});
    if (fails) {
      out.spec = trial;
      out.residual = r;
    }
  }
  for (std::string_view name : kBindingNames)
    if (!binding_is_zero(out.spec, name)) out.remaining.emplace_back(name);
  return out;
}

}  // namespace unicon
