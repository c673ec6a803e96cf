#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "weylcalc/manifold.hpp"
#include "weylcalc/mapping.hpp"
#include "weylcalc/verify.hpp"

namespace weyl {

/// Parsed and validated manifold specification file. Expressions are parsed
/// eagerly; any schema or expression error throws SpecError with the path of
/// the offending field.
struct ManifoldSpec {
  std::string name;
  int dimension = 0;
  std::vector<std::string> coordinates;
  std::vector<std::vector<ScalarField>> metric;
  std::vector<ScalarField> weyl_form;        // T
  std::vector<ScalarField> connection_form;  // S
  std::optional<ConformalMapping> mapping;
  std::optional<ScalarField> gauge_lambda;
  std::vector<std::pair<double, double>> box;
  int points = 100;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  double gap = 1e-3;

  WeylManifold manifold() const;
};

class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

ManifoldSpec load_spec(const std::string& path);
ManifoldSpec parse_spec(const std::string& json_text,
                        const std::string& origin = "<string>");

/// Byte-deterministic report serialization: fixed key order, shortest
/// round-trip number formatting.
std::string report_to_json(const VerificationReport& report);
VerificationReport report_from_json(const std::string& json_text);

/// Human-readable summary table (identity, equation tag, residual, verdict).
std::string report_to_text(const VerificationReport& report);

}  // namespace weyl
