#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weylcalc/curvature.hpp"
#include "weylcalc/spec_file.hpp"
#include "weylcalc/verify.hpp"

#ifndef WEYLCALC_FIXTURE_DIR
#define WEYLCALC_FIXTURE_DIR "fixtures"
#endif

namespace {

using namespace weyl;

constexpr int kExitOk = 0;
constexpr int kExitIdentityFailure = 1;
constexpr int kExitSpecError = 2;

int env_threads() {
  const char* env = std::getenv("WEYLCALC_THREADS");
  if (!env || !*env) return 0;
  return std::atoi(env);
}

std::vector<double> parse_point(const std::string& text, int n) {
  std::vector<double> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      coords.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw SpecError("--point: cannot parse coordinate '" + item + "'");
    }
  }
  if (static_cast<int>(coords.size()) != n)
    throw SpecError("--point: expected " + std::to_string(n) +
                    " coordinates, got " + std::to_string(coords.size()));
  return coords;
}

void print_tensor_text(std::ostream& out, const std::string& label,
                       const std::string& ref, const Tensor& t) {
  out << label;
  if (!ref.empty()) out << "  [" << ref << "]";
  out << "\n";
  const int n = t.dim();
  const int rank = t.rank();
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  // Row-major walk; one line per trailing-pair row for rank >= 2.
  const std::size_t total = t.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int d = rank - 1; d >= 0; --d) {
      idx[static_cast<std::size_t>(d)] = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    if (rank >= 1 && idx[static_cast<std::size_t>(rank - 1)] == 0) {
      out << " ";
      for (int d = 0; d + 1 < rank; ++d)
        out << " " << idx[static_cast<std::size_t>(d)];
      out << " :";
    }
    out << "  " << format_double(t[flat]);
    if (idx[static_cast<std::size_t>(rank - 1)] == n - 1) out << "\n";
  }
  if (rank == 0) out << "  " << format_double(t[0]) << "\n";
}

void tensor_to_json(std::string& out, const Tensor& t) {
  out += '[';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += format_double(t[i]);
  }
  out += ']';
}

int cmd_tensors(const std::string& spec_path, const std::string& point_text,
                const std::string& format) {
  ManifoldSpec spec = load_spec(spec_path);
  WeylManifold m = spec.manifold();
  const int n = m.dim();
  Point p{parse_point(point_text, n)};
  for (int i = 0; i < n; ++i)
    if (p.coords[static_cast<std::size_t>(i)] < spec.box[static_cast<std::size_t>(i)].first ||
        p.coords[static_cast<std::size_t>(i)] > spec.box[static_cast<std::size_t>(i)].second) {
      std::cerr << "warning: point lies outside the sampling box\n";
      break;
    }

  Frame f = m.frame(p);
  CurvatureSet sym = curvature_set(f, Conn::Symmetric);
  CurvatureSet bar = curvature_set(f, Conn::SemiSymmetric);
  Tensor s_ij = s_tensor(f);
  double s_tr = s_trace(s_ij, f.g_inv);
  Tensor tors = torsion(f.gamma_bar);
  ProjectivePair pw = projective_tensor(sym, f, Conn::Symmetric);
  ProjectivePair pwb = projective_tensor(bar, f, Conn::SemiSymmetric);
  Tensor k_ij = projective_k_tensor(s_ij, s_tr, f.g);

  if (format == "json") {
    std::string out = "{\"point\":[";
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
      if (i) out += ',';
      out += format_double(p.coords[i]);
    }
    out += ']';
    auto emit = [&out](const char* key, const Tensor& t) {
      out += ",\"";
      out += key;
      out += "\":";
      tensor_to_json(out, t);
    };
    emit("g", f.g);
    emit("g_inv", f.g_inv);
    emit("levi_civita", f.gamma_lc);
    emit("gamma", f.gamma);
    emit("gamma_bar", f.gamma_bar);
    emit("torsion", tors);
    emit("riemann", sym.R_up);
    emit("riemann_bar", bar.R_up);
    emit("ricci", sym.ricci);
    emit("ricci_bar", bar.ricci);
    out += ",\"scalar\":" + format_double(sym.scalar);
    out += ",\"scalar_bar\":" + format_double(bar.scalar);
    emit("s_tensor", s_ij);
    if (n >= 3) {
      emit("conformal", conformal_tensor(sym, f.g, f.g_inv));
      emit("conformal_bar", conformal_tensor(bar, f.g, f.g_inv));
    } else {
      out += ",\"conformal\":null,\"conformal_bar\":null";
    }
    emit("z", sym.Z_up);
    emit("z_bar", bar.Z_up);
    emit("projective", pw.W);
    emit("projective_bar", pwb.W);
    emit("h_bar", pwb.H);
    emit("k", k_ij);
    out += "}\n";
    std::cout << out;
    return kExitOk;
  }

  std::ostream& out = std::cout;
  out << "manifold: " << spec.name << " (n=" << n << ") at (";
  for (std::size_t i = 0; i < p.coords.size(); ++i)
    out << (i ? ", " : "") << format_double(p.coords[i]);
  out << ")\n\n";
  print_tensor_text(out, "g_ij", "(1.1)", f.g);
  print_tensor_text(out, "g^ij", "", f.g_inv);
  print_tensor_text(out, "{i jk}  Levi-Civita", "(1.3)", f.gamma_lc);
  print_tensor_text(out, "Gamma^i_jk  symmetric connection", "(1.3)", f.gamma);
  print_tensor_text(out, "Gammabar^i_jk  semi-symmetric connection", "(1.10)",
                    f.gamma_bar);
  print_tensor_text(out, "torsion T^i_jk", "(1.11)", tors);
  print_tensor_text(out, "R^h_ijk", "(1.12)", sym.R_up);
  print_tensor_text(out, "Rbar^h_ijk", "(1.12)/(1.13)", bar.R_up);
  print_tensor_text(out, "R_ij", "(1.16)", sym.ricci);
  print_tensor_text(out, "Rbar_ij", "(1.16)", bar.ricci);
  out << "R = " << format_double(sym.scalar)
      << "   Rbar = " << format_double(bar.scalar) << "  [(1.17)]\n\n";
  print_tensor_text(out, "S_ij", "(1.14)", s_ij);
  if (n >= 3) {
    print_tensor_text(out, "C_mijk", "(1.6)",
                      conformal_tensor(sym, f.g, f.g_inv));
    print_tensor_text(out, "Cbar_mijk", "(1.18)",
                      conformal_tensor(bar, f.g, f.g_inv));
  } else {
    out << "C_mijk / Cbar_mijk  [(1.6)/(1.18)]\n"
        << "  undefined for n=2 (Eq. 1.6 requires n-2 != 0)\n";
  }
  print_tensor_text(out, "Z^h_ijk", "(1.7)", sym.Z_up);
  print_tensor_text(out, "Zbar^h_ijk", "(2.6)", bar.Z_up);
  print_tensor_text(out, "W_mijk", "(1.19)", pw.W);
  print_tensor_text(out, "Wbar_mijk", "(1.19)", pwb.W);
  print_tensor_text(out, "Hbar_ij", "(1.19)", pwb.H);
  print_tensor_text(out, "K_ij", "end of §1", k_ij);
  return kExitOk;
}

int cmd_verify(const std::string& spec_path, int points_override,
               std::int64_t seed_override, double tol_override,
               double gap_override, const std::string& out_path) {
  ManifoldSpec spec = load_spec(spec_path);
  WeylManifold m = spec.manifold();

  SuiteConfig cfg;
  cfg.box = spec.box;
  cfg.points = points_override > 0 ? points_override : spec.points;
  cfg.seed = seed_override >= 0 ? static_cast<std::uint64_t>(seed_override)
                                : spec.seed;
  cfg.tol = tol_override > 0 ? tol_override : spec.tolerance;
  cfg.gap = gap_override > 0 ? gap_override : spec.gap;
  cfg.threads = env_threads();

  VerificationReport report =
      run_suite(m, spec.name, cfg, spec.mapping, spec.gauge_lambda);
  std::cout << report_to_text(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw SpecError(out_path + ": cannot open for writing");
    out << report_to_json(report);
  }
  return report.all_pass() ? kExitOk : kExitIdentityFailure;
}

int cmd_fixtures_list() {
  // Bundled spec files, shipped with the source tree.
  static const char* kFixtures[] = {
      "flat_r2.json",        "flat_r3.json",      "weyl_const_t_n3.json",
      "curved_diag_n3.json", "sconc_witness_n2.json",
      "sconc_witness_n3.json", "nonprop_s_n3.json", "curved_n4.json",
  };
  for (const char* f : kFixtures)
    std::cout << WEYLCALC_FIXTURE_DIR << "/" << f << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weylcalc: tensor calculus for Weyl manifolds with a "
               "semi-symmetric non-metric connection"};
  app.require_subcommand(1);

  std::string spec_path, point_text, format = "text", out_path;
  int points_override = 0;
  std::int64_t seed_override = -1;
  double tol_override = 0, gap_override = 0;

  CLI::App* tensors = app.add_subcommand(
      "tensors", "Evaluate all tensor blocks of a spec at one point");
  tensors->add_option("spec", spec_path, "manifold spec file")->required();
  tensors->add_option("--point", point_text, "comma-separated coordinates")
      ->required();
  tensors->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* verify = app.add_subcommand(
      "verify", "Run the full identity suite and write a report");
  verify->add_option("spec", spec_path, "manifold spec file")->required();
  verify->add_option("--points", points_override, "sample-point count");
  verify->add_option("--seed", seed_override, "sampling seed");
  verify->add_option("--tol", tol_override, "identity tolerance");
  verify->add_option("--gap", gap_override, "theorem-cell gap");
  verify->add_option("--out", out_path, "JSON report path");

  CLI::App* fixtures =
      app.add_subcommand("fixtures", "Operations on bundled fixtures");
  CLI::App* fixtures_list =
      fixtures->add_subcommand("list", "List bundled fixture spec files");
  fixtures->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (tensors->parsed())
      return cmd_tensors(spec_path, point_text, format);
    if (verify->parsed())
      return cmd_verify(spec_path, points_override, seed_override,
                        tol_override, gap_override, out_path);
    if (fixtures_list->parsed()) return cmd_fixtures_list();
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  } catch (const EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kExitSpecError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  }
  return kExitSpecError;
}
