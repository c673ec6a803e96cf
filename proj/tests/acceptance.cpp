// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "weylcalc/fuzz.hpp"
#include "weylcalc/manifold.hpp"
#include "weylcalc/spec_file.hpp"
#include "weylcalc/verify.hpp"

#ifndef WEYLCALC_FIXTURE_DIR
#define WEYLCALC_FIXTURE_DIR "fixtures"
#endif

namespace {

using weyl::IdentityRecord;
using weyl::ManifoldSpec;
using weyl::Point;
using weyl::SuiteConfig;
using weyl::VerificationReport;
using weyl::WeylManifold;

struct Run {
  std::string name;
  int dimension;
  VerificationReport report;
};

const IdentityRecord* find(const VerificationReport& rep,
                           const std::string& name) {
  for (const auto& rec : rep.identities)
    if (rec.name == name) return &rec;
  return nullptr;
}

int g_failures = 0;

void verdict(int id, const std::string& label, bool pass,
             const std::string& detail) {
  std::cout << "criterion " << id << " [" << (pass ? "PASS" : "FAIL") << "] "
            << label;
  if (!detail.empty()) std::cout << " -- " << detail;
  std::cout << "\n";
  if (!pass) ++g_failures;
}

/// Residual-bound check for one identity across every run.
void residual_criterion(int id, const std::string& label,
                        const std::vector<Run>& runs,
                        const std::vector<std::string>& names, double bound) {
  bool pass = true;
  double worst = 0.0;
  std::string where;
  for (const Run& r : runs)
    for (const std::string& name : names) {
      const IdentityRecord* rec = find(r.report, name);
      if (!rec) continue;  // dimension-guarded entries
      if (rec->max_residual > worst) {
        worst = rec->max_residual;
        where = r.name + ":" + name;
      }
      if (rec->max_residual > bound) pass = false;
    }
  std::ostringstream d;
  d << "worst residual " << weyl::format_double(worst) << " at " << where
    << " (bound " << weyl::format_double(bound) << ")";
  verdict(id, label, pass, d.str());
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string dir = WEYLCALC_FIXTURE_DIR;
  const std::vector<std::string> fixture_names = {
      "flat_r2",          "flat_r3",          "weyl_const_t_n3",
      "curved_diag_n3",   "sconc_witness_n2", "sconc_witness_n3",
      "nonprop_s_n3",     "curved_n4"};

  std::vector<Run> runs;
  try {
    for (const std::string& name : fixture_names) {
      ManifoldSpec spec = weyl::load_spec(dir + "/" + name + ".json");
      SuiteConfig cfg;
      cfg.box = spec.box;
      cfg.points = spec.points;
      cfg.seed = spec.seed;
      cfg.tol = spec.tolerance;
      cfg.gap = spec.gap;
      runs.push_back({name, spec.dimension,
                      weyl::run_suite(spec.manifold(), name, cfg, spec.mapping,
                                      spec.gauge_lambda)});
    }
    for (int k = 0; k < 20; ++k) {
      const int n = 2 + k % 3;
      weyl::FuzzedManifold fz = weyl::fuzz_manifold(n, 101 + k);
      SuiteConfig cfg;
      cfg.seed = 101 + k;
      std::string name = "fuzz_n" + std::to_string(n) + "_s" +
                         std::to_string(101 + k);
      runs.push_back({name, n,
                      weyl::run_suite(fz.manifold, name, cfg, fz.mapping,
                                      std::nullopt)});
    }
  } catch (const std::exception& e) {
    std::cout << "criterion 0 [FAIL] suite construction -- " << e.what()
              << "\n";
    return 1;
  }
  const double suite_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  // 1. Compatibility on every fixture and fuzzed manifold.
  residual_criterion(1, "metric compatibility", runs,
                     {"compatibility", "gauge_compatibility"}, 1e-9);

  // 2. Torsion dual pipeline at the tight bound.
  residual_criterion(2, "torsion dual pipeline", runs,
                     {"torsion_dual_pipeline"}, 1e-12);

  // 3. Curvature relation and its lowered/contracted forms.
  residual_criterion(3, "curvature relations", runs,
                     {"curvature_relation", "curvature_relation_lowered",
                      "ricci_relation", "scalar_relation"},
                     1e-9);

  // 4. Curvature properties a-d and their concircular analogues, with the
  //    trace chain checked link by link.
  residual_criterion(
      4, "curvature and concircular properties", runs,
      {"property_a_antisymmetry", "property_b_pair_symmetry",
       "property_c_trace_equality", "property_c_trace_vs_ricci",
       "property_c_trace_vs_weyl_form", "property_d_cyclic_sum",
       "lemma21_a_antisymmetry", "lemma21_b_pair_symmetry", "lemma21_c_trace",
       "lemma21_d_cyclic_sum"},
      1e-9);

  // 5. Conformal invariance for n >= 3; n = 2 rejected by the guard.
  {
    bool pass = true;
    std::string detail;
    for (const Run& r : runs) {
      const IdentityRecord* inv = find(r.report, "conformal_invariance");
      const IdentityRecord* guard = find(r.report, "conformal_dimension_guard");
      if (r.dimension >= 3) {
        if (!inv || !inv->pass) {
          pass = false;
          detail = r.name + " missing/failing conformal_invariance";
        }
      } else if (!guard || !guard->pass) {
        pass = false;
        detail = r.name + " missing/failing conformal_dimension_guard";
      }
    }
    verdict(5, "conformal invariance and dimension guard", pass, detail);
  }

  // 6. Projective relation.
  residual_criterion(6, "projective relation", runs, {"projective_relation"},
                     1e-9);

  // 7. Mapping transformation laws and concircular invariance.
  residual_criterion(
      7, "mapping laws and concircular invariance", runs,
      {"mapping_gamma_sym", "mapping_riemann_sym", "mapping_gamma_bar",
       "mapping_riemann_bar", "concircular_proportionality",
       "concircular_riemann_shift", "concircular_ricci_shift",
       "concircular_scalar_shift", "z_bar_invariance"},
      1e-9);

  // 8. Theorem dichotomy: witnesses land in the right cells, beta law holds,
  //    and no manifold ever produces a mixed (violation) cell.
  {
    bool pass = true;
    std::string detail;
    auto cell_of = [&](const std::string& name) -> const weyl::TheoremRecord* {
      for (const Run& r : runs)
        if (r.name == name) return &r.report.theorem;
      return nullptr;
    };
    for (const char* wit : {"sconc_witness_n2", "sconc_witness_n3",
                            "flat_r2", "flat_r3"}) {
      const weyl::TheoremRecord* th = cell_of(wit);
      if (!th || th->cell != "both_concircular" ||
          th->beta_consistency_residual > 1e-9) {
        pass = false;
        detail = std::string(wit) + " not in both_concircular";
      }
    }
    const weyl::TheoremRecord* bad = cell_of("nonprop_s_n3");
    if (!bad || bad->cell != "both_nonconcircular" || bad->D_S <= 1e-3 ||
        bad->D_Z <= 1e-3) {
      pass = false;
      detail = "nonprop_s_n3 not in both_nonconcircular";
    }
    for (const Run& r : runs)
      if (r.report.theorem.cell == "violation" || !r.report.theorem.pass) {
        pass = false;
        detail = r.name + " produced cell " + r.report.theorem.cell;
      }
    verdict(8, "theorem dichotomy", pass, detail);
  }

  // 9. Oracle independence: symbolic connection/form derivatives vs central
  //    finite differences on >= 1000 (field, point) samples.
  {
    const double h = 1e-5;
    int samples = 0, bad = 0;
    double worst_rel = 0.0;
    ManifoldSpec s3 = weyl::load_spec(dir + "/curved_diag_n3.json");
    ManifoldSpec s4 = weyl::load_spec(dir + "/curved_n4.json");
    std::vector<WeylManifold> ms = {s3.manifold(), s4.manifold(),
                                    weyl::fuzz_manifold(3, 999).manifold,
                                    weyl::fuzz_manifold(4, 998).manifold};
    std::uint64_t idx = 0;
    for (const WeylManifold& m : ms) {
      const int n = m.dim();
      std::vector<const weyl::ScalarField*> fields;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            fields.push_back(&m.gamma_field(i, j, k));
            fields.push_back(&m.gamma_bar_field(i, j, k));
          }
      for (int i = 0; i < n; ++i) fields.push_back(&m.connection_form()[i]);
      for (const weyl::ScalarField* f : fields)
        for (int l = 0; l < n; ++l) {
          std::vector<double> p;
          for (int c = 0; c < n; ++c)
            p.push_back(weyl::uniform_from(7, idx++, -0.4, 0.4));
          const double sym = f->differentiate(l).evaluate(p);
          std::vector<double> hi = p, lo = p;
          hi[static_cast<std::size_t>(l)] += h;
          lo[static_cast<std::size_t>(l)] -= h;
          const double fd = (f->evaluate(hi) - f->evaluate(lo)) / (2.0 * h);
          const double rel =
              std::fabs(sym - fd) / (1.0 + std::fabs(sym));
          worst_rel = std::max(worst_rel, rel);
          if (rel > 1e-5) ++bad;
          ++samples;
        }
    }
    std::ostringstream d;
    d << samples << " samples, worst relative deviation "
      << weyl::format_double(worst_rel);
    verdict(9, "finite-difference oracle independence",
            samples >= 1000 && bad == 0, d.str());
  }

  // 10. Fault injection: a +1e-3 offset on any single connection coefficient
  //     field must fail the suite, with the failing identity named.
  {
    bool pass = true;
    std::string detail;
    ManifoldSpec spec = weyl::load_spec(dir + "/curved_diag_n3.json");
    const int n = spec.dimension;
    for (int i = 0; i < n && pass; ++i)
      for (int j = 0; j < n && pass; ++j)
        for (int k = 0; k < n && pass; ++k) {
          weyl::GammaBarPerturbation fault{i, j, k, 1e-3};
          WeylManifold m(spec.coordinates, spec.metric, spec.weyl_form,
                         spec.connection_form, fault);
          SuiteConfig cfg;
          cfg.box = spec.box;
          cfg.points = 5;
          VerificationReport rep =
              weyl::run_suite(m, "fault", cfg, spec.mapping, std::nullopt);
          bool named = false;
          for (const auto& rec : rep.identities)
            if (!rec.pass) named = true;
          if (rep.all_pass() || !named) {
            pass = false;
            std::ostringstream d;
            d << "perturbation (" << i << "," << j << "," << k
              << ") went undetected";
            detail = d.str();
          }
        }
    if (pass) detail = "all 27 single-coefficient perturbations detected";
    verdict(10, "fault injection", pass, detail);
  }

  // 11. Determinism: byte-identical reports across reruns and thread counts.
  {
    ManifoldSpec spec = weyl::load_spec(dir + "/curved_diag_n3.json");
    SuiteConfig cfg;
    cfg.box = spec.box;
    cfg.points = spec.points;
    cfg.seed = spec.seed;
    bool pass = true;
    std::string first;
    for (int threads : {1, 2, 5, 1}) {
      cfg.threads = threads;
      VerificationReport rep = weyl::run_suite(
          spec.manifold(), spec.name, cfg, spec.mapping, spec.gauge_lambda);
      const std::string json = weyl::report_to_json(rep);
      if (first.empty())
        first = json;
      else if (json != first)
        pass = false;
    }
    verdict(11, "byte-identical reports", pass,
            pass ? "identical across threads {1,2,5} and rerun" : "mismatch");
  }

  std::cout << "suite scale: " << runs.size() << " manifolds in "
            << weyl::format_double(suite_seconds) << "s (budget 60s)"
            << (suite_seconds < 60.0 ? "" : " [FAIL]") << "\n";
  if (suite_seconds >= 60.0) ++g_failures;

  return g_failures == 0 ? 0 : 1;
}
