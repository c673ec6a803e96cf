#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weylcalc/expr.hpp"
#include "weylcalc/tensor.hpp"

namespace weyl {

/// A chart point; coords.size() must equal the manifold dimension.
struct Point {
  std::vector<double> coords;
};

/// All point-evaluated geometric data needed by the curvature formulas.
/// Index layout:
///   dg(i,j,k)        = d_k g_ij
///   dT(j,k)          = d_k T_j,  dS likewise
///   gamma*(i,j,k)    = Gamma^i_jk
///   dgamma*(i,j,k,l) = d_l Gamma^i_jk
struct Frame {
  Point point;
  Tensor g, g_inv, dg;
  Tensor T, S, S_up;
  Tensor dT, dS;
  Tensor gamma_lc, gamma, gamma_bar;
  Tensor dgamma, dgamma_bar;
};

/// Test hook: adds a constant offset to one semi-symmetric connection
/// coefficient field, so identity checks can be shown to catch it.
struct GammaBarPerturbation {
  int i, j, k;
  double eps;
};

/// Weyl manifold (g_ij, T_k) carrying the 1-form S_k of the semi-symmetric
/// non-metric connection. All connection coefficients and their partial
/// derivatives are built symbolically once at construction; frames evaluate
/// them at points.
class WeylManifold {
 public:
  WeylManifold(std::vector<std::string> coords,
               std::vector<std::vector<ScalarField>> g,
               std::vector<ScalarField> T, std::vector<ScalarField> S,
               std::optional<GammaBarPerturbation> fault = std::nullopt);

  int dim() const { return n_; }
  const std::vector<std::string>& coords() const { return coords_; }
  const ScalarField::NamesPtr& names_ptr() const { return names_; }
  const std::vector<std::vector<ScalarField>>& metric_fields() const { return g_; }
  const std::vector<ScalarField>& weyl_form() const { return T_; }
  const std::vector<ScalarField>& connection_form() const { return S_; }
  const ScalarField& gamma_field(int i, int j, int k) const;
  const ScalarField& gamma_bar_field(int i, int j, int k) const;

  Frame frame(const Point& p) const;

  /// Combined digest of every input expression (report metadata).
  std::uint64_t digest() const;

 private:
  int n_;
  std::vector<std::string> coords_;
  ScalarField::NamesPtr names_;
  std::vector<std::vector<ScalarField>> g_;
  std::vector<ScalarField> T_, S_;

  // symbolic tables, flattened row-major
  std::vector<ScalarField> g_inv_;      // n*n
  std::vector<ScalarField> dg_;         // n*n*n  (i,j,k) = d_k g_ij
  std::vector<ScalarField> dT_, dS_;    // n*n    (i,k)   = d_k T_i / d_k S_i
  std::vector<ScalarField> s_up_;       // n
  std::vector<ScalarField> gamma_lc_;   // n^3
  std::vector<ScalarField> gamma_;      // n^3
  std::vector<ScalarField> gamma_bar_;  // n^3
  std::vector<ScalarField> dgamma_;     // n^4
  std::vector<ScalarField> dgamma_bar_; // n^4
};

// Connection-level operations. Each (manifold, point) overload computes a
// fresh frame; the frame overloads reuse one.
Tensor levi_civita(const WeylManifold& m, const Point& p);
Tensor weyl_connection(const WeylManifold& m, const Point& p);
Tensor ssnm_connection(const WeylManifold& m, const Point& p);

/// d_k g_ij - Gamma^r_ik g_rj - Gamma^r_jk g_ir - 2 g_ij T_k; zero when the
/// Weyl compatibility condition holds.
Tensor compatibility_residual(const Frame& f);
Tensor compatibility_residual(const WeylManifold& m, const Point& p);

/// T^i_jk = gammabar^i_jk - gammabar^i_kj.
Tensor torsion(const Tensor& gamma_bar);

/// V_{i,j} = d_j V_i - Gamma^r_ij V_r, returned with layout (i,j).
Tensor covariant_derivative_covector(const Tensor& values, const Tensor& dvalues,
                                     const Tensor& gamma);
Tensor covariant_derivative_covector(const WeylManifold& m, const Point& p,
                                     const std::vector<ScalarField>& field,
                                     const Tensor& gamma);

/// g~ = lambda^2 g, T~ = T + d(ln lambda), S unchanged.
WeylManifold gauge_rescale(const WeylManifold& m, const ScalarField& lambda);

}  // namespace weyl
