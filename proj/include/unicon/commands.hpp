#pragma once

// verify / tensors / cases / ablate. Each returns the exit code and the full
// report text, so the CLI is a thin shell around these.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "unicon/config.hpp"

namespace unicon {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Deterministic JSON text: every double printed with %.17g.

namespace report_detail {

inline std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write(const ojson& j, std::string& out, int indent, int depth) {
  const auto nl = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(d * indent), ' ');
  };
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        nl(depth + 1);
        out += ojson(k).dump();
        out += indent < 0 ? ":" : ": ";
        write(v, out, indent, depth + 1);
      }
      nl(depth);
      out += '}';
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const ojson& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        if (flat && !first && indent >= 0) out += ' ';
        first = false;
        if (!flat) nl(depth + 1);
        write(v, out, indent, depth + 1);
      }
      if (!flat) nl(depth);
      out += ']';
      return;
    }
    case ojson::value_t::number_float:
      out += number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace report_detail

inline std::string render_json(const ojson& j) {
  std::string out;
  report_detail::write(j, out, 2, 0);
  out += '\n';
  return out;
}

template <std::size_t R>
ojson to_ojson(const Tensor<double, R>& t) {
  const int n = t.dim();
  const auto& f = t.flat();
  std::function<ojson(std::size_t, std::size_t)> rec = [&](std::size_t level, std::size_t offset) -> ojson {
    ojson a = ojson::array();
    std::size_t stride = 1;
    for (std::size_t r = level + 1; r < R; ++r) stride *= static_cast<std::size_t>(n);
    for (int k = 0; k < n; ++k) {
      const std::size_t off = offset + static_cast<std::size_t>(k) * stride;
      if (level + 1 == R) a.push_back(f[off]);
      else a.push_back(rec(level + 1, off));
    }
    return a;
  };
  return rec(0, 0);
}

inline ojson conventions() {
  return {{"indexing", "0-based array indices; coordinate x^(a+1) is index a"},
          {"g", "g[i][j] = g_ij"},
          {"gamma", "gamma[k][i][j] = Gamma^k_ij, nabla_{d_i} d_j = Gamma^k_ij d_k"},
          {"h", "h[k][i][j] = H^k_ij, deformation tensor"},
          {"torsion", "torsion[k][i][j] = T^k_ij"},
          {"nonmetricity", "nonmetricity[i][j][k] = (nabla~_i g)_jk"},
          {"r", "r[l][i][j][k] = R^l_ijk with R(d_i, d_j) d_k = R^l_ijk d_l"},
          {"two_du", "2du(d_i, d_j) = d_i u_j - d_j u_i"},
          {"residual", "max|a - b| / max(1, max|a|, max|b|)"}};
}

inline ojson point_json(const std::vector<double>& p) {
  ojson a = ojson::array();
  for (double x : p) a.push_back(x);
  return a;
}

inline ojson connection_json(const RunConfig& cfg) {
  if (cfg.case_id) {
    const CasePreset& c = find_case(*cfg.case_id);
    return {{"kind", "case"}, {"case", c.id}, {"name", c.name}};
  }
  return {{"kind", "raw"}};
}

inline ojson header(std::string_view command, const RunConfig* cfg) {
  ojson h;
  h["command"] = command;
  h["conventions"] = conventions();
  if (cfg != nullptr) {
    h["manifold"] = {{"name", cfg->manifold.name}, {"dim", cfg->manifold.chart.dim}};
    h["connection"] = connection_json(*cfg);
    h["point_count"] = cfg->points.size();
  }
  return h;
}

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

// ---------------------------------------------------------------------------
// Ablation section.

inline ojson ablation_json(const RunConfig& cfg, const Corruption& corruption) {
  const AblationTable t = ablation_table(cfg.spec, cfg.manifold, cfg.points, corruption, cfg.tolerances);
  ojson a;
  a["failing_stage"] = stage_name(t.failing);
  a["dominant"] = t.dominant.empty() ? ojson(nullptr) : ojson(t.dominant);
  a["connection_discrepancy"] = t.connection_discrepancy;
  a["curvature_discrepancy"] = t.curvature_discrepancy;
  ojson rows = ojson::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"term", r.name}, {"stage", stage_name(r.stage)}, {"max_abs", r.max_abs}, {"explained", r.explained}});
  }
  a["table"] = rows;

  const auto mf = minimal_failure(cfg.spec, cfg.manifold, cfg.points, corruption, cfg.tolerances);
  if (!mf) {
    a["minimal_failure"] = nullptr;
    return a;
  }
  ojson m;
  m["stage"] = stage_name(mf->stage);
  ojson steps = ojson::array();
  for (const auto& s : mf->steps) {
    steps.push_back({{"zeroed", s.zeroed}, {"residual", s.residual}, {"still_fails", s.still_fails}});
  }
  m["search"] = steps;
  m["remaining_bindings"] = mf->remaining;
  m["residual"] = mf->residual;
  ojson counter;
  counter["manifold"] = ojson::parse(cfg.manifold_json.dump());
  counter["connection"] = {{"raw", ojson::parse(raw_to_json(mf->spec).dump())}};
  ojson pts = ojson::array();
  for (const auto& p : cfg.points) pts.push_back(point_json(p));
  counter["points"] = pts;
  m["counterexample_config"] = counter;
  if (corruption.active()) m["corrupt_term"] = corruption.name;
  a["minimal_failure"] = m;
  return a;
}

// ---------------------------------------------------------------------------

inline CommandResult cmd_verify(const RunConfig& cfg, const std::string& corrupt_term = "") {
  const Corruption corruption = corruption_for(corrupt_term);
  const SweepResult s = sweep(cfg.spec, cfg.manifold, cfg.points, corruption);
  const auto tols = sweep_tolerances(cfg.tolerances);

  ojson r = header("verify", &cfg);
  r["corrupt_term"] = corruption.active() ? ojson(corruption.name) : ojson(nullptr);
  bool pass = true;
  ojson checks = ojson::array();
  for (std::size_t q = 0; q < kSweepChecks.size(); ++q) {
    const bool ok = s.worst[q] < tols[q];
    pass = pass && ok;
    checks.push_back({{"name", kSweepChecks[q]},
                      {"max_residual", s.worst[q]},
                      {"tolerance", tols[q]},
                      {"worst_point", s.worst_index[q]},
                      {"pass", ok}});
  }
  r["checks"] = checks;

  if (cfg.case_id) {
    const CaseCheckResult cr =
        verify_case(*cfg.case_id, cfg.bindings, cfg.manifold, cfg.points, cfg.tolerances.cases, corruption.h);
    ojson cc = ojson::array();
    for (const auto& c : cr.checks) {
      cc.push_back({{"name", c.name},
                    {"max_residual", c.value},
                    {"tolerance", c.tolerance},
                    {"asserted", c.asserted},
                    {"pass", c.passed()}});
    }
    r["case_checks"] = {{"case", cr.id}, {"pass", cr.pass}, {"checks", cc}};
    pass = pass && cr.pass;
  }

  ojson per = ojson::array();
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    ojson res;
    for (std::size_t q = 0; q < kSweepChecks.size(); ++q) res[std::string(kSweepChecks[q])] = s.per_point[k][q];
    per.push_back({{"index", k}, {"point", point_json(s.points[k])}, {"residuals", res}});
  }
  r["points"] = per;
  r["ablation"] = pass ? ojson(nullptr) : ablation_json(cfg, corruption);
  r["pass"] = pass;

  CommandResult out{pass ? 0 : 1, ""};
  if (cfg.output == OutputFormat::kJson) {
    out.output = render_json(r);
    return out;
  }
  std::ostringstream os;
  os << "verify  " << cfg.manifold.name << "  "
     << (cfg.case_id ? "case " + *cfg.case_id : std::string("raw connection")) << "  points=" << cfg.points.size()
     << (corruption.active() ? "  corrupt=" + corruption.name : std::string()) << "\n";
  auto line = [&](const std::string& name, double v, double tol, const char* tag) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-38s %10.3e  tol %8.1e  %s\n", name.c_str(), v, tol, tag);
    os << buf;
  };
  for (const auto& c : r["checks"]) {
    line(c["name"].get<std::string>(), c["max_residual"].get<double>(), c["tolerance"].get<double>(),
         c["pass"].get<bool>() ? "PASS" : "FAIL");
  }
  if (r.contains("case_checks")) {
    for (const auto& c : r["case_checks"]["checks"]) {
      line("case." + c["name"].get<std::string>(), c["max_residual"].get<double>(), c["tolerance"].get<double>(),
           !c["asserted"].get<bool>() ? "REPORTED" : c["pass"].get<bool>() ? "PASS" : "FAIL");
    }
  }
  if (!pass && r["ablation"]["dominant"].is_string()) {
    os << "  dominant term: " << r["ablation"]["dominant"].get<std::string>() << " ("
       << r["ablation"]["failing_stage"].get<std::string>() << ")\n";
  }
  os << "result: " << (pass ? "PASS" : "FAIL") << "\n";
  out.output = os.str();
  return out;
}

inline CommandResult cmd_tensors(const RunConfig& cfg) {
  ojson r = header("tensors", &cfg);
  ojson pts = ojson::array();
  for (std::size_t k = 0; k < cfg.points.size(); ++k) {
    const PointEvaluation e = evaluate_point(cfg.spec, cfg.manifold, cfg.points[k]);
    pts.push_back({{"index", k},
                   {"point", point_json(cfg.points[k])},
                   {"g", to_ojson(e.frame.fields.g)},
                   {"gamma", to_ojson(e.frame.gamma)},
                   {"h", to_ojson(e.frame.h)},
                   {"gamma_tilde", to_ojson(e.frame.gamma_tilde)},
                   {"torsion", to_ojson(e.torsion.direct)},
                   {"nonmetricity", to_ojson(e.nonmetricity.direct)},
                   {"r_formula", to_ojson(e.formula.total)},
                   {"r_direct", to_ojson(e.direct)}});
  }
  r["points"] = pts;
  return {0, render_json(r)};
}

inline bool is_sub_case(const CasePreset& c) { return !c.id.empty() && std::isalpha(static_cast<unsigned char>(c.id.back())); }

inline std::vector<std::string> case_check_names(const CasePreset& c) {
  std::vector<std::string> v = {"connection_reduced_vs_general", "torsion_general_law", "metricity_general_law",
                                c.metricity_law_deviates ? "metricity_stated_law (reported)" : "metricity_stated_law"};
  if (c.metric_connection) v.emplace_back("metricity_zero");
  if (c.expected_symmetric) v.emplace_back("torsion_zero");
  if (c.requires_curved_manifold) v.emplace_back("torsion_stated_law");
  if (c.has_curvature_law) {
    v.emplace_back("curvature_formula_vs_stated_law");
    v.emplace_back("curvature_stated_law_vs_direct");
    v.emplace_back("s_skew_equals_2domega");
  }
  return v;
}

inline CommandResult cmd_cases(OutputFormat fmt = OutputFormat::kJson) {
  ojson r = header("cases", nullptr);
  ojson list = ojson::array();
  int primary = 0;
  std::vector<std::string> subs;
  for (const auto& c : case_catalogue()) {
    const bool sub = is_sub_case(c);
    if (sub) subs.push_back(c.id);
    else ++primary;
    list.push_back({{"id", c.id},
                    {"sub_case", sub},
                    {"name", c.name},
                    {"reference", c.reference},
                    {"required_bindings", c.required_bindings},
                    {"fixed_values", c.fixed_values},
                    {"connection_law", c.connection_law},
                    {"metricity_law", c.metricity_law},
                    {"expected_symmetric", c.expected_symmetric},
                    {"metric_connection", c.metric_connection},
                    {"manifold_requirement", c.requires_curved_manifold ? "curved (Q != 0)" : "any"},
                    {"metricity_law_deviates", c.metricity_law_deviates},
                    {"checks", case_check_names(c)}});
  }
  r["primary_count"] = primary;
  r["sub_cases"] = subs;
  r["cases"] = list;
  if (fmt == OutputFormat::kJson) return {0, render_json(r)};
  std::ostringstream os;
  for (const auto& c : case_catalogue()) {
    os << (is_sub_case(c) ? "  " : "") << c.id << "  " << c.name << "\n      " << c.fixed_values
       << "\n      bindings:";
    for (const auto& b : c.required_bindings) os << " " << b;
    os << "\n      H = " << c.connection_law << "\n      " << c.metricity_law;
    if (c.requires_curved_manifold) os << "\n      requires a curved manifold (Q != 0)";
    if (c.metricity_law_deviates) os << "\n      stated metricity coefficient disagrees with the general law (reported)";
    os << "\n";
  }
  return {0, os.str()};
}

inline CommandResult cmd_ablate(const RunConfig& cfg, const std::string& corrupt_term = "") {
  const Corruption corruption = corruption_for(corrupt_term);
  ojson r = header("ablate", &cfg);
  r["corrupt_term"] = corruption.active() ? ojson(corruption.name) : ojson(nullptr);
  const auto reports = compare_curvature(cfg.spec, cfg.manifold, cfg.points, corruption);
  std::array<double, kTermGroupCount> worst{};
  ojson per = ojson::array();
  for (std::size_t k = 0; k < reports.size(); ++k) {
    ojson contrib;
    for (std::size_t g = 0; g < kTermGroupCount; ++g) {
      contrib[std::string(kTermGroupNames[g])] = reports[k].term_contributions[g];
      worst[g] = std::max(worst[g], reports[k].term_contributions[g]);
    }
    per.push_back({{"index", k},
                   {"point", point_json(reports[k].point)},
                   {"residual", reports[k].residual},
                   {"term_contributions", contrib}});
  }
  ojson groups;
  std::vector<std::string> nonzero;
  for (std::size_t g = 0; g < kTermGroupCount; ++g) {
    groups[std::string(kTermGroupNames[g])] = worst[g];
    if (worst[g] > 0.0) nonzero.emplace_back(kTermGroupNames[g]);
  }
  r["term_groups"] = groups;
  r["nonzero_groups"] = nonzero;
  r["points"] = per;
  r["ablation"] = ablation_json(cfg, corruption);
  if (cfg.output == OutputFormat::kJson) return {0, render_json(r)};
  std::ostringstream os;
  os << "ablate  " << cfg.manifold.name << "  points=" << cfg.points.size() << "\n";
  for (const auto& row : r["ablation"]["table"]) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-14s %-10s max %10.3e  explained %6.4f\n",
                  row["term"].get<std::string>().c_str(), row["stage"].get<std::string>().c_str(),
                  row["max_abs"].get<double>(), row["explained"].get<double>());
    os << buf;
  }
  os << "failing stage: " << r["ablation"]["failing_stage"].get<std::string>() << "\n";
  if (r["ablation"]["dominant"].is_string()) os << "dominant: " << r["ablation"]["dominant"].get<std::string>() << "\n";
  return {0, os.str()};
}

}  // namespace unicon
