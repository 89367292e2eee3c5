#pragma once

// JSON run configuration: manifold, connection (case + bindings or raw
// fields), points and tolerance overrides. Every schema error carries the
// JSON path of the offending value.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "unicon/diagnostics.hpp"

namespace unicon {

enum class OutputFormat { kJson, kPretty };

struct RunConfig {
  Manifold manifold;
  nlohmann::json manifold_json;  // as given, echoed into counterexample configs
  ConnectionSpec spec;
  std::optional<std::string> case_id;  // set when the connection came from a case
  Bindings bindings;
  std::vector<std::vector<double>> points;
  Tolerances tolerances;
  OutputFormat output = OutputFormat::kJson;
};

namespace config_detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing key '" + key + "'");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

inline int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

inline std::uint64_t seed(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a non-negative integer seed");
  return j.get<std::uint64_t>();
}

inline void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) fail(path, "unexpected key '" + k + "'");
  }
}

/// {"terms": [{"c": real, "e": [int, …]}]} or a bare number (constant).
inline Polynomial polynomial(const json& j, int n, const std::string& path) {
  if (j.is_number()) return Polynomial::constant(n, j.get<double>());
  if (!j.is_object()) fail(path, "expected a polynomial object or a number");
  only_keys(j, {"terms"}, path);
  const json& terms = require(j, "terms", path);
  if (!terms.is_array()) fail(path + ".terms", "expected an array");
  std::vector<Monomial> out;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string tp = path + ".terms[" + std::to_string(t) + "]";
    only_keys(terms[t], {"c", "e"}, tp);
    Monomial m;
    m.coeff = number(require(terms[t], "c", tp), tp + ".c");
    const json& e = require(terms[t], "e", tp);
    if (!e.is_array()) fail(tp + ".e", "expected an exponent array");
    if (static_cast<int>(e.size()) != n) {
      throw DimensionMismatch(tp + ".e: " + std::to_string(e.size()) + " exponents, manifold dimension is " +
                              std::to_string(n));
    }
    for (std::size_t a = 0; a < e.size(); ++a) {
      const int x = integer(e[a], tp + ".e[" + std::to_string(a) + "]");
      if (x < 0) fail(tp + ".e[" + std::to_string(a) + "]", "negative exponent");
      m.exponents.push_back(x);
    }
    out.push_back(std::move(m));
  }
  return Polynomial(n, std::move(out));
}

inline OneFormField one_form(const json& j, int n, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of polynomials");
  if (static_cast<int>(j.size()) != n) {
    throw DimensionMismatch(path + ": one-form has " + std::to_string(j.size()) + " components, manifold dimension is " +
                            std::to_string(n));
  }
  OneFormField f;
  for (std::size_t i = 0; i < j.size(); ++i) f.comps.push_back(polynomial(j[i], n, path + "[" + std::to_string(i) + "]"));
  return f;
}

inline std::vector<Polynomial> matrix(const json& j, int n, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an n×n array");
  if (static_cast<int>(j.size()) != n) {
    throw DimensionMismatch(path + ": " + std::to_string(j.size()) + " rows, manifold dimension is " + std::to_string(n));
  }
  std::vector<Polynomial> comps;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) fail(rp, "expected a row array");
    if (static_cast<int>(j[r].size()) != n) {
      throw DimensionMismatch(rp + ": " + std::to_string(j[r].size()) + " columns, manifold dimension is " +
                              std::to_string(n));
    }
    for (std::size_t c = 0; c < j[r].size(); ++c)
      comps.push_back(polynomial(j[r][c], n, rp + "[" + std::to_string(c) + "]"));
  }
  return comps;
}

/// Row k, column i holds φ^k_i. Also "identity", "ricci", "zero",
/// {"symmetric_part": …} and {"skew_part": …}.
inline EndoField endo(const json& j, int n, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "identity") return EndoField::identity(n);
    if (s == "ricci") return EndoField::ricci_operator(n);
    if (s == "zero") return EndoField::zero(n);
    fail(path, "unknown endomorphism '" + s + "'");
  }
  if (j.is_object()) {
    if (j.size() == 1 && j.contains("symmetric_part")) {
      return EndoField::symmetric_part(
          std::make_shared<const EndoField>(endo(j["symmetric_part"], n, path + ".symmetric_part")));
    }
    if (j.size() == 1 && j.contains("skew_part")) {
      return EndoField::skew_part(std::make_shared<const EndoField>(endo(j["skew_part"], n, path + ".skew_part")));
    }
    fail(path, "expected a matrix, a named endomorphism, or {symmetric_part|skew_part: …}");
  }
  return {n, PolynomialEndo{matrix(j, n, path)}};
}

inline Manifold manifold(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  if (j.contains("preset") == j.contains("metric")) fail(path, "exactly one of 'preset' and 'metric' is required");
  if (j.contains("preset")) {
    only_keys(j, {"preset", "n", "radius", "k", "epsilon", "seed"}, path);
    if (!j["preset"].is_string()) fail(path + ".preset", "expected a string");
    const auto name = j["preset"].get<std::string>();
    PresetParams p;
    if (j.contains("n")) p.n = integer(j["n"], path + ".n");
    if (j.contains("radius")) p.radius = number(j["radius"], path + ".radius");
    if (j.contains("k")) p.k = number(j["k"], path + ".k");
    if (j.contains("epsilon")) p.epsilon = number(j["epsilon"], path + ".epsilon");
    if (j.contains("seed")) p.seed = seed(j["seed"], path + ".seed");
    if ((name == "euclidean" || name == "bumpy") && !j.contains("n")) fail(path, "preset '" + name + "' needs 'n'");
    if (name == "bumpy" && !j.contains("seed")) fail(path, "preset 'bumpy' needs 'seed'");
    return preset_manifold(name, p);
  }
  only_keys(j, {"metric", "domain", "name"}, path);
  const json& dom = require(j, "domain", path);
  const json& lo = require(dom, "lower", path + ".domain");
  const json& hi = require(dom, "upper", path + ".domain");
  if (!lo.is_array() || !hi.is_array()) fail(path + ".domain", "lower and upper must be arrays");
  std::vector<double> lower, upper;
  for (std::size_t a = 0; a < lo.size(); ++a) lower.push_back(number(lo[a], path + ".domain.lower[" + std::to_string(a) + "]"));
  for (std::size_t a = 0; a < hi.size(); ++a) upper.push_back(number(hi[a], path + ".domain.upper[" + std::to_string(a) + "]"));
  const Chart chart = Chart::box(lower, upper);
  const int n = chart.dim;
  std::vector<Polynomial> comps = matrix(j["metric"], n, path + ".metric");
  // Upper triangle is authoritative.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < a; ++b) comps[static_cast<std::size_t>(a * n + b)] = comps[static_cast<std::size_t>(b * n + a)];
  std::string name = "inline";
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail(path + ".name", "expected a string");
    name = j["name"].get<std::string>();
  }
  return {name, chart, MetricField{n, PolynomialMetric{std::move(comps)}}};
}

inline std::string case_id(const json& j, const std::string& path) {
  if (j.is_number_integer()) return std::to_string(j.get<int>());
  if (j.is_string()) return j.get<std::string>();
  fail(path, "expected an integer or a string case id");
}

inline Bindings bindings(const json& j, int n, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  Bindings b;
  for (const auto& [key, value] : j.items()) {
    const std::string p = path + "." + key;
    if (key == "f1" || key == "f2") {
      b.scalars[key] = polynomial(value, n, p);
    } else if (key == "u" || key == "u1" || key == "u2" || key == "omega") {
      b.one_forms[key] = std::make_shared<const OneFormField>(one_form(value, n, p));
    } else if (key == "phi") {
      b.endos[key] = std::make_shared<const EndoField>(endo(value, n, p));
    } else {
      fail(p, "unknown binding");
    }
  }
  return b;
}

/// Missing fields are zero. "u1": "u" style strings alias an earlier form.
inline ConnectionSpec raw_spec(const json& j, int n, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  if (j.contains("random")) {
    only_keys(j, {"random"}, path);
    const json& r = j["random"];
    only_keys(r, {"seed"}, path + ".random");
    return random_spec(n, seed(require(r, "seed", path + ".random"), path + ".random.seed"));
  }
  only_keys(j, {"f1", "f2", "u", "u1", "u2", "phi"}, path);
  ConnectionSpec s = ConnectionSpec::zero(n);
  if (j.contains("f1")) s.f1 = polynomial(j["f1"], n, path + ".f1");
  if (j.contains("f2")) s.f2 = polynomial(j["f2"], n, path + ".f2");
  std::map<std::string, std::shared_ptr<const OneFormField>> forms;
  for (const char* key : {"u", "u1", "u2"}) {
    std::shared_ptr<const OneFormField> f = s.u;
    if (j.contains(key)) {
      const json& v = j[key];
      const std::string p = path + "." + key;
      if (v.is_string()) {
        const auto target = v.get<std::string>();
        if (!forms.contains(target)) fail(p, "alias '" + target + "' must name an earlier one-form");
        f = forms[target];
      } else {
        f = std::make_shared<const OneFormField>(one_form(v, n, p));
      }
    } else {
      f = std::make_shared<const OneFormField>(OneFormField::zero(n));
    }
    forms[key] = f;
  }
  s.u = forms["u"];
  s.u1 = forms["u1"];
  s.u2 = forms["u2"];
  if (j.contains("phi")) s.phi = std::make_shared<const EndoField>(endo(j["phi"], n, path + ".phi"));
  return s;
}

inline std::vector<std::vector<double>> points(const json& j, const Chart& chart, const std::string& path) {
  if (j.is_object()) {
    only_keys(j, {"count", "seed"}, path);
    const int count = integer(require(j, "count", path), path + ".count");
    if (count <= 0) fail(path + ".count", "must be positive");
    if (!j.contains("seed")) fail(path, "sampling needs a 'seed'");
    return chart.sample(count, seed(j["seed"], path + ".seed"));
  }
  if (!j.is_array()) fail(path, "expected a list of points or {count, seed}");
  if (j.empty()) fail(path, "no points");
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    if (!j[k].is_array()) fail(p, "expected a coordinate array");
    if (static_cast<int>(j[k].size()) != chart.dim) {
      throw DimensionMismatch(p + ": point has " + std::to_string(j[k].size()) + " coordinates, chart dimension is " +
                              std::to_string(chart.dim));
    }
    std::vector<double> x;
    for (std::size_t a = 0; a < j[k].size(); ++a) x.push_back(number(j[k][a], p + "[" + std::to_string(a) + "]"));
    require_inside(chart, x);
    out.push_back(std::move(x));
  }
  return out;
}

inline void tolerances(const json& j, Tolerances& t, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string p = path + "." + key;
    const double x = number(value, p);
    if (!(x > 0.0)) fail(p, "tolerance must be positive");
    if (key == "torsion") t.torsion = t.cases.torsion = x;
    else if (key == "metricity") t.metricity = t.cases.metricity = x;
    else if (key == "transpose_torsion") t.transpose = x;
    else if (key == "antisymmetry") t.antisymmetry = x;
    else if (key == "curvature") t.curvature = t.cases.curvature_oracle = x;
    else if (key == "case_connection") t.cases.connection = x;
    else if (key == "case_curvature_law") t.cases.curvature_law = x;
    else if (key == "s_skew") t.cases.s_skew = x;
    else fail(p, "unknown tolerance");
  }
}

}  // namespace config_detail

inline RunConfig parse_config(const nlohmann::json& root) {
  using namespace config_detail;
  if (!root.is_object()) fail("$", "expected an object");
  only_keys(root, {"manifold", "connection", "points", "tolerances", "output"}, "$");
  RunConfig cfg;
  cfg.manifold_json = require(root, "manifold", "$");
  cfg.manifold = manifold(cfg.manifold_json, "$.manifold");
  const int n = cfg.manifold.chart.dim;

  const json& conn = require(root, "connection", "$");
  if (!conn.is_object()) fail("$.connection", "expected an object");
  if (conn.contains("case") == conn.contains("raw")) fail("$.connection", "exactly one of 'case' and 'raw' is required");
  if (conn.contains("case")) {
    only_keys(conn, {"case", "bindings"}, "$.connection");
    cfg.case_id = case_id(conn["case"], "$.connection.case");
    find_case(*cfg.case_id);
    cfg.bindings = bindings(conn.contains("bindings") ? conn["bindings"] : json::object(), n, "$.connection.bindings");
    cfg.spec = build_case(*cfg.case_id, cfg.bindings, cfg.manifold);
  } else {
    only_keys(conn, {"raw"}, "$.connection");
    cfg.spec = raw_spec(conn["raw"], n, "$.connection.raw");
  }

  cfg.points = points(require(root, "points", "$"), cfg.manifold.chart, "$.points");
  if (root.contains("tolerances")) tolerances(root["tolerances"], cfg.tolerances, "$.tolerances");
  if (root.contains("output")) {
    const json& o = root["output"];
    if (o == "json") cfg.output = OutputFormat::kJson;
    else if (o == "pretty") cfg.output = OutputFormat::kPretty;
    else fail("$.output", "expected \"json\" or \"pretty\"");
  }
  return cfg;
}

inline RunConfig parse_config(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("$: malformed JSON: ") + e.what());
  }
  return parse_config(root);
}

// ---------------------------------------------------------------------------
// Serialization of fields, used for the counterexample config.

inline nlohmann::json to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : p.terms()) terms.push_back({{"c", t.coeff}, {"e", t.exponents}});
  return {{"terms", terms}};
}

inline nlohmann::json to_json(const OneFormField& f) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : f.comps) a.push_back(to_json(c));
  return a;
}

inline nlohmann::json to_json(const EndoField& e) {
  return std::visit(
      [&](const auto& k) -> nlohmann::json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, IdentityEndo>) {
          return "identity";
        } else if constexpr (std::is_same_v<K, RicciOperatorEndo>) {
          return "ricci";
        } else if constexpr (std::is_same_v<K, SymmetricPartEndo>) {
          return {{"symmetric_part", to_json(*k.base)}};
        } else if constexpr (std::is_same_v<K, SkewPartEndo>) {
          return {{"skew_part", to_json(*k.base)}};
        } else {
          nlohmann::json rows = nlohmann::json::array();
          for (int r = 0; r < e.n; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < e.n; ++c) row.push_back(to_json(k.comps[static_cast<std::size_t>(r * e.n + c)]));
            rows.push_back(row);
          }
          return rows;
        }
      },
      e.kind);
}

inline nlohmann::json raw_to_json(const ConnectionSpec& s) {
  nlohmann::json raw = nlohmann::json::object();
  raw["f1"] = to_json(s.f1);
  raw["f2"] = to_json(s.f2);
  raw["u"] = to_json(*s.u);
  raw["u1"] = s.u1 == s.u ? nlohmann::json("u") : to_json(*s.u1);
  raw["u2"] = s.u2 == s.u ? nlohmann::json("u") : s.u2 == s.u1 ? nlohmann::json("u1") : to_json(*s.u2);
  raw["phi"] = to_json(*s.phi);
  return raw;
}

}  // namespace unicon
