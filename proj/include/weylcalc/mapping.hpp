#pragma once

#include <stdexcept>
#include <vector>

#include "weylcalc/curvature.hpp"
#include "weylcalc/manifold.hpp"
#include "weylcalc/tensor.hpp"

namespace weyl {

/// Conformal mapping in the fixed-gauge sense: the metric is kept, the two
/// 1-forms shift by P_j = T_j - T*_j and Q_j = S_j - S*_j.
struct ConformalMapping {
  std::vector<ScalarField> P, Q;
};

ConformalMapping identity_mapping(const WeylManifold& m);

/// Target manifold with g* = g, T* = T - P, S* = S - Q. All starred objects
/// are then computed by the ordinary code paths, so transformation-law checks
/// compare two independent pipelines.
WeylManifold apply_mapping(const WeylManifold& m, const ConformalMapping& map);

/// Deformation tensors of the mapping at a point. Layouts are rank-2 (i,j):
///   P_ij = nabla_j P_i - P_i P_j + 1/2 g_ij |P|^2
///   Q_ij = nabla_j Q_i + Q_i Q_j - 1/2 g_ij |Q|^2   (note the sign flips)
///   Pu_ij = P_ij - P_i S_j, Qu_ij likewise (the "underlined" variants)
///   W_ij = Pu_ij - Qu_ij + P_i Q_j + P_j Q_i
/// phi is the pointwise trace estimate g^ij W_ij / n, and pq = g^sr P_s Q_r.
struct MappingFrame {
  Tensor P_vals, Q_vals;  // rank-1 covector values
  Tensor dP;              // (i,j) = d_j P_i, needed by the curvature law
  Tensor P_ij, Q_ij;
  Tensor P_under, Q_under;
  Tensor W;
  double phi;
  double pq;
};

MappingFrame mapping_frame(const ConformalMapping& map, const Frame& f);
MappingFrame mapping_frame(const WeylManifold& m, const ConformalMapping& map,
                           const Point& p);

/// Concircularity test: true iff max over points of
/// max_abs(W_ij - phi_hat g_ij) <= tol with phi_hat estimated per point by
/// trace. phi_hat values are returned in point order.
struct ConcircularCheck {
  bool concircular = false;
  double max_residual = 0.0;
  std::vector<double> phi;
};
ConcircularCheck is_concircular(const WeylManifold& m,
                                const ConformalMapping& map,
                                const std::vector<Point>& points,
                                double tol = 1e-9);

/// Residuals of the transformation laws at one point. `target` must be
/// apply_mapping(m, map); it is passed in so callers can reuse it across
/// points. Each entry compares an independently built starred object against
/// the displayed law applied to unstarred ones.
struct MappingLawResiduals {
  double gamma_sym = 0;    // symmetric-connection coefficient law
  double riemann_sym = 0;  // symmetric-connection curvature law
  double gamma_bar = 0;    // semi-symmetric coefficient law
  double riemann_bar = 0;  // semi-symmetric curvature law (full W form)
  double under_p = 0;      // Pu_ij = P_ij - P_i S_j reconstruction
  double under_q = 0;
};
MappingLawResiduals mapping_law_residuals_at(const ConformalMapping& map,
                                             const Frame& f, const Frame& ft);
MappingLawResiduals mapping_law_residuals(const WeylManifold& m,
                                          const ConformalMapping& map,
                                          const std::vector<Point>& points);

/// Concircular-case laws: curvature shift with the 2(phi - g^sr P_s Q_r)
/// factor, the Ricci and scalar shifts, and Zbar* - Zbar invariance.
struct ConcircularResiduals {
  double riemann_shift = 0;  // curvature law in the proportional form
  double ricci_shift = 0;
  double scalar_shift = 0;
  double z_invariance = 0;   // max_abs(Zbar*(target) - Zbar(source))
};
ConcircularResiduals concircular_residuals_at(const ConformalMapping& map,
                                              const Frame& f, const Frame& ft);

/// Aggregate over points; requires the mapping to be concircular on the
/// sample (checked with tol) and throws NotConcircularError otherwise.
ConcircularResiduals concircular_invariance_residual(
    const WeylManifold& m, const ConformalMapping& map,
    const std::vector<Point>& points, double tol = 1e-9);

class NotConcircularError : public std::runtime_error {
 public:
  explicit NotConcircularError(double residual);
  double residual;
};

}  // namespace weyl
