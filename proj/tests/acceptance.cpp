// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: unicon_acceptance --cli <path to unicon_cli> --configs <dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "unicon/commands.hpp"

using namespace unicon;

namespace {

// Every tolerance used below, pinned.
constexpr double kTorsionTol = 1e-10;
constexpr double kMetricityTol = 1e-10;
constexpr double kDegenerateTol = 1e-12;
constexpr double kCaseTol = 1e-10;
constexpr double kCase17LawTol = 1e-10;
constexpr double kCase17OracleTol = 1e-8;
constexpr double kSSkewTol = 1e-12;
constexpr double kFixtureTol = 1e-12;
constexpr double kFormulaOracleTol = 1e-8;
constexpr double kSectionalTol = 1e-9;
constexpr double kRicciIdTol = 1e-9;
constexpr double kSweepSeconds = 10.0;

constexpr int kSweepSpecs = 100;
constexpr int kSweepPoints = 20;

int failures = 0;

void report(int id, bool ok, const std::string& title, const std::string& detail) {
  std::printf("[%s] C%-2d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string sci(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", x);
  return b;
}

std::vector<Manifold> sweep_manifolds() {
  return {euclidean(2), euclidean(3), euclidean(4), sphere2(1.0), half_plane(1.0), bumpy(2, 0.05, 7), bumpy(3, 0.05, 7)};
}

struct RunOutput {
  int exit_code = -1;
  std::string stdout_text;
};

RunOutput run_cli(const std::string& cli, const std::string& args, const std::string& tag) {
  const auto out = std::filesystem::temp_directory_path() / ("unicon_acceptance_" + tag + ".txt");
  const std::string cmd = "\"" + cli + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunOutput r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.stdout_text = ss.str();
  std::filesystem::remove(out);
  return r;
}

// ---------------------------------------------------------------------------

void criteria_1_2() {
  const auto start = std::chrono::steady_clock::now();
  double worst_t = 0.0, worst_q = 0.0;
  long evaluations = 0;
  for (const Manifold& m : sweep_manifolds()) {
    for (int s = 0; s < kSweepSpecs; ++s) {
      const ConnectionSpec spec = random_spec(m.chart.dim, 1000 + static_cast<std::uint64_t>(s));
      for (const auto& p : m.chart.sample(kSweepPoints, 5000 + static_cast<std::uint64_t>(s))) {
        const PointFrame<double> fr = point_frame<double>(spec, m, p);
        worst_t = std::max(worst_t, torsion(fr).residual);
        worst_q = std::max(worst_q, nonmetricity(fr).residual);
        ++evaluations;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(1, worst_t < kTorsionTol && secs < kSweepSeconds, "torsion law",
         "max residual " + sci(worst_t) + " < " + sci(kTorsionTol) + " over " + std::to_string(evaluations) +
             " points; sweep " + sci(secs) + " s < " + sci(kSweepSeconds) + " s");
  report(2, worst_q < kMetricityTol, "metricity law",
         "max residual " + sci(worst_q) + " < " + sci(kMetricityTol) + " over the same sweep");
}

void criterion_3() {
  double worst = 0.0;
  for (const Manifold& m : sweep_manifolds()) {
    const ConnectionSpec z = ConnectionSpec::zero(m.chart.dim);
    for (const auto& p : m.chart.sample(20, 77)) {
      const PointEvaluation e = evaluate_point(z, m, p);
      const FormulaContext ctx = formula_context(z, m, p);
      worst = std::max({worst, normalized_residual(e.frame.gamma_tilde, e.frame.gamma),
                        normalized_residual(e.torsion.direct, Tensor<double, 3>(m.chart.dim)),
                        normalized_residual(e.nonmetricity.direct, Tensor<double, 3>(m.chart.dim)),
                        normalized_residual(e.formula.total, ctx.riemann), normalized_residual(e.direct, ctx.riemann)});
    }
  }
  report(3, worst < kDegenerateTol, "zero-field degeneration",
         "max of |Gamma~ - Gamma|, |T~|, |nabla~ g|, |R~formula - R|, |R~direct - R| = " + sci(worst) + " < " +
             sci(kDegenerateTol));
}

void criterion_4() {
  CaseTolerances tol;
  tol.connection = tol.metricity = tol.torsion = kCaseTol;
  int checked = 0;
  bool ok = true;
  double worst = 0.0;
  std::string failed, deviations;
  for (const auto& c : case_catalogue()) {
    std::vector<Manifold> ms = {bumpy(2, 0.05, 7), bumpy(3, 0.05, 7)};
    if (c.requires_curved_manifold) ms = {sphere2(1.0), half_plane(1.0), bumpy(3, 0.05, 7)};
    double dev = 0.0;
    for (const Manifold& m : ms) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Bindings b = random_bindings(c, m.chart.dim, seed);
        const CaseCheckResult r = verify_case(c.id, b, m, m.chart.sample(20, 100 + seed), tol);
        ++checked;
        if (!r.pass) {
          ok = false;
          failed += " " + c.id;
        }
        for (const auto& x : r.checks) {
          if (x.asserted) worst = std::max(worst, x.value);
          else dev = std::max(dev, x.value);
        }
      }
    }
    if (c.metricity_law_deviates) deviations += " case " + c.id + " stated-law residual " + sci(dev) + ";";
  }
  report(4, ok, "case catalogue",
         std::to_string(case_catalogue().size()) + " presets, " + std::to_string(checked) +
             " (case, manifold, seed) runs, max asserted residual " + sci(worst) + " < " + sci(kCaseTol) +
             (ok ? "" : "; failing:" + failed) + "; reported, not asserted:" + deviations);
}

void criterion_5() {
  CaseTolerances tol;
  tol.curvature_law = kCase17LawTol;
  tol.curvature_oracle = kCase17OracleTol;
  tol.s_skew = kSSkewTol;
  double law = 0.0, oracle = 0.0, skew = 0.0;
  bool ok = true;
  for (const Manifold& m : {euclidean(2), bumpy(2, 0.05, 7)}) {
    const Bindings b = random_bindings(find_case("17"), 2, 17);
    const CaseCheckResult r = verify_case("17", b, m, m.chart.sample(50, 170), tol);
    ok = ok && r.pass;
    for (const auto& x : r.checks) {
      if (x.name == "curvature_formula_vs_stated_law") law = std::max(law, x.value);
      if (x.name == "curvature_stated_law_vs_direct") oracle = std::max(oracle, x.value);
      if (x.name == "s_skew_equals_2domega") skew = std::max(skew, x.value);
    }
  }
  report(5, ok, "case 17 curvature",
         "formula vs stated law " + sci(law) + " < " + sci(kCase17LawTol) + ", stated law vs direct " + sci(oracle) +
             " < " + sci(kCase17OracleTol) + ", s-skew " + sci(skew) + " < " + sci(kSSkewTol));
}

void criterion_6() {
  const Manifold flat = euclidean(2);
  const int n = 2;
  // E1: case 12, u = x¹ dx², p = (1, 0).
  Bindings b1;
  b1.one_forms["u"] =
      std::make_shared<const OneFormField>(OneFormField{{Polynomial(n), Polynomial::coordinate(n, 0)}});
  const std::vector<double> p1 = {1.0, 0.0};
  const PointEvaluation e1 = evaluate_point(build_case("12", b1, flat), flat, p1);
  const double e1_err = std::max({std::abs(e1.frame.h(0, 0, 1) - 1.0), std::abs(e1.frame.h(1, 0, 0) + 1.0),
                                  std::abs(e1.torsion.direct(0, 0, 1) - 1.0), max_abs(e1.nonmetricity.direct)});
  // E2: case 17, ω = x² dx¹, p = (0, 1).
  Bindings b2;
  b2.one_forms["omega"] =
      std::make_shared<const OneFormField>(OneFormField{{Polynomial::coordinate(n, 1), Polynomial(n)}});
  const std::vector<double> p2 = {0.0, 1.0};
  const PointEvaluation e2 = evaluate_point(build_case("17", b2, flat), flat, p2);
  double e2_err = 0.0;
  for (const auto* r : {&e2.formula.total, &e2.direct}) {
    e2_err = std::max({e2_err, std::abs((*r)(0, 0, 1, 0) + 2.0), std::abs((*r)(1, 0, 1, 0) + 1.0)});
  }
  e2_err = std::max({e2_err, std::abs(e2.nonmetricity.direct(0, 0, 0) + 4.0),
                     std::abs(e2.nonmetricity.direct(0, 1, 1) + 2.0)});
  report(6, e1_err < kFixtureTol && e2_err < kFixtureTol, "hand fixtures",
         "E1 (H^1_12=1, H^2_11=-1, T^1_12=1, nabla~g=0) error " + sci(e1_err) +
             "; E2 (R^1_121=-2, R^2_121=-1 formula and direct) error " + sci(e2_err) + " < " + sci(kFixtureTol));
}

void criterion_7() {
  double worst = 0.0;
  int points = 0;
  for (const Manifold& m : {bumpy(2, 0.05, 7), bumpy(3, 0.05, 7)}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const ConnectionSpec spec = random_spec(m.chart.dim, 700 + s);
      for (const auto& r : compare_curvature(spec, m, m.chart.sample(10, 900 + s))) {
        worst = std::max(worst, r.residual);
        ++points;
      }
    }
  }
  report(7, worst < kFormulaOracleTol, "closed-form curvature vs direct oracle",
         "full random specs on bumpy(2), bumpy(3), " + std::to_string(points) + " points, max residual " + sci(worst) +
             " < " + sci(kFormulaOracleTol));
}

double sectional(const Manifold& m, const std::vector<double>& p) {
  const Mat<Jet2> gj = evaluate_metric<Jet2>(m, p);
  const Mat<double> g = values(gj);
  const Tensor<double, 4> r = riemann<double>(christoffel<Jet1>(gj));
  double num = 0.0;  // g(R(∂1,∂2)∂2, ∂1)
  for (int l = 0; l < 2; ++l) num += g(l, 0) * r(l, 0, 1, 1);
  return num / (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1));
}

void criterion_8() {
  double ks = 0.0, kh = 0.0, q = 0.0;
  const Manifold s = sphere2(1.0), h = half_plane(1.0);
  for (const auto& p : s.chart.sample(20, 8)) {
    ks = std::max(ks, std::abs(sectional(s, p) - 1.0));
    const RicciData rd = ricci_data(evaluate_metric<Jet3>(s, p));
    q = std::max(q, max_abs_diff(rd.q, identity<double>(2)));
  }
  for (const auto& p : h.chart.sample(20, 8)) kh = std::max(kh, std::abs(sectional(h, p) + 1.0));
  report(8, ks < kSectionalTol && kh < kSectionalTol && q < kRicciIdTol, "baseline geometry",
         "|K_sphere - 1| " + sci(ks) + ", |K_half_plane + 1| " + sci(kh) + " < " + sci(kSectionalTol) +
             "; |Q - Id| on sphere " + sci(q) + " < " + sci(kRicciIdTol));
}

void criterion_9(const std::string& cli, const std::string& config) {
  int ok_count = 0;
  std::string bad;
  for (const auto& term : corruptible_terms()) {
    const RunOutput r = run_cli(cli, "verify --config \"" + config + "\" --corrupt-term " + term, "c9");
    bool ok = r.exit_code == 1;
    if (ok) {
      const auto j = nlohmann::json::parse(r.stdout_text, nullptr, false);
      ok = !j.is_discarded() && j["ablation"]["dominant"] == term;
    }
    if (ok) ++ok_count;
    else bad += " " + term;
  }
  const int total = static_cast<int>(corruptible_terms().size());
  report(9, ok_count == total, "fault injection",
         std::to_string(ok_count) + "/" + std::to_string(total) +
             " corrupted terms give exit 1 with the corrupted term dominant" + (bad.empty() ? "" : "; failed:" + bad));
}

void criterion_10(const std::string& cli, const std::string& config) {
  const RunOutput a = run_cli(cli, "verify --config \"" + config + "\"", "c10a");
  const RunOutput b = run_cli(cli, "verify --config \"" + config + "\"", "c10b");
  const RunOutput c = run_cli(cli, "verify --config \"" + config + "\" --corrupt-term f1_block", "c10c");
  const RunOutput d = run_cli(cli, "verify --config \"" + config + "\" --corrupt-term f1_block", "c10d");
  const bool ok = a.exit_code == 0 && !a.stdout_text.empty() && a.stdout_text == b.stdout_text &&
                  c.exit_code == 1 && c.stdout_text == d.stdout_text;
  report(10, ok, "determinism",
         "two verify runs byte-identical (" + std::to_string(a.stdout_text.size()) + " bytes), two corrupted runs "
         "with ablation byte-identical (" + std::to_string(c.stdout_text.size()) + " bytes)");
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli, configs;
  for (int k = 1; k + 1 < argc; k += 2) {
    const std::string key = argv[k];
    if (key == "--cli") cli = argv[k + 1];
    if (key == "--configs") configs = argv[k + 1];
  }
  if (cli.empty() || configs.empty()) {
    std::fprintf(stderr, "usage: %s --cli <unicon_cli> --configs <dir>\n", argv[0]);
    return 2;
  }
  const std::string full = configs + "/random_bumpy3.json";

  const std::vector<std::function<void()>> runs = {
      criteria_1_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8,
      [&] { criterion_9(cli, full); }, [&] { criterion_10(cli, full); }};
  for (const auto& run : runs) {
    try {
      run();
    } catch (const std::exception& e) {
      std::printf("[FAIL] exception: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%s: %d criterion failure(s)\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
