#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weylcalc/manifold.hpp"
#include "weylcalc/mapping.hpp"

namespace weyl {

struct SuiteConfig {
  /// Per-coordinate sampling interval; filled with [-0.5, 0.5] per dimension
  /// when empty.
  std::vector<std::pair<double, double>> box;
  int points = 100;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  double gap = 1e-3;  // pass/fail separation for the theorem cells
  int threads = 0;    // 0 = hardware concurrency
  int retry_cap = 10; // resampling attempts on evaluation domain errors
};

struct IdentityRecord {
  std::string name;
  std::string paper_ref;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<double> worst_point;  // sample where max_residual occurred
};

/// Theorem verdict cells:
///   "both_concircular"     D_S <= tol and D_Z <= tol
///   "both_nonconcircular"  D_S >  gap and D_Z >  gap
///   "indeterminate"        either residual falls between tol and gap
///   "dimension_degenerate" n = 2 with D_S > gap: the two concircular
///                          tensors coincide identically in two dimensions,
///                          so only the reverse implication is testable
///   "violation"            one residual <= tol while the other > gap (n >= 3)
struct TheoremRecord {
  double D_S = 0.0;
  double D_Z = 0.0;
  std::string cell;
  double beta_consistency_residual = 0.0;  // only when D_S <= tol
  bool pass = false;
};

struct VerificationReport {
  std::string spec_name;
  std::string version;
  int dimension = 0;
  std::uint64_t manifold_digest = 0;
  std::uint64_t seed = 0;
  int points = 0;
  std::vector<std::pair<double, double>> box;
  double tolerance = 0.0;
  double gap = 0.0;
  std::vector<IdentityRecord> identities;
  TheoremRecord theorem;

  bool all_pass() const;
};

inline constexpr const char* kReportVersion = "1.0.0";

/// Definition check: per point, beta_hat = g^ij S_ij / n and the residual is
/// max_abs(S_ij - beta_hat g_ij). Returns the max residual over points and
/// the beta_hat values in point order.
std::pair<double, std::vector<double>> s_concircular_residual(
    const WeylManifold& m, const std::vector<Point>& points);

/// Two-directional equivalence check between S-concircularity and the
/// coincidence of the two concircular curvature tensors.
TheoremRecord theorem_check(const WeylManifold& m,
                            const std::vector<Point>& points, double tol,
                            double gap);

/// Runs every identity in the suite over `config.points` sampled points and
/// assembles a complete, deterministic report. An optional mapping drives the
/// transformation-law block; when absent, a seeded polynomial mapping is
/// generated. The concircular block always uses a Q = P mapping that
/// satisfies the concircularity hypothesis (the given one if suitable,
/// otherwise a generated fallback).
VerificationReport run_suite(const WeylManifold& m, const std::string& name,
                             const SuiteConfig& config,
                             const std::optional<ConformalMapping>& mapping =
                                 std::nullopt,
                             const std::optional<ScalarField>& gauge_lambda =
                                 std::nullopt);

}  // namespace weyl
