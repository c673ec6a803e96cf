#pragma once

#include <map>
#include <string>

#include "weylcalc/manifold.hpp"
#include "weylcalc/tensor.hpp"

namespace weyl {

/// Which connection a curvature quantity belongs to.
enum class Conn { Symmetric, SemiSymmetric };

/// Curvature objects of one connection at one point.
struct CurvatureSet {
  Tensor R_up;    // R^h_ijk
  Tensor R_low;   // R_mijk = g_mh R^h_ijk
  Tensor ricci;   // R_ij = R^k_ijk
  double scalar;  // R = g^ij R_ij
  Tensor Z_up;    // R^h_ijk - R/(n(n-1)) (delta^h_k g_ij - delta^h_j g_ik)
  Tensor Z_low;
  Tensor Z_ricci; // R_ij - (R/n) g_ij
};

/// R^h_ijk = d_j G^h_ik - d_k G^h_ij + G^h_rj G^r_ik - G^h_rk G^r_ij
Tensor riemann(const Frame& f, Conn which);

/// Homothetic trace V_jk = R^r_rjk.
Tensor homothetic_trace(const Tensor& r_up);

/// Ricci convention: contract the upper index with the last lower one.
Tensor ricci_tensor(const Tensor& r_up);
double scalar_curvature(const Tensor& ricci, const Tensor& g_inv);

/// S_ij = S_{i,j} - S_i S_j + 1/2 g_ij g^kr S_k S_r, derivative w.r.t. the
/// symmetric Weyl connection.
Tensor s_tensor(const Frame& f);
double s_trace(const Tensor& s_ij, const Tensor& g_inv);

CurvatureSet curvature_set(const Frame& f, Conn which);

/// Antisymmetrized covariant derivative of a covector V w.r.t. a symmetric
/// connection: out(a,b) = nabla_[a V_b] = 1/2 (d_a V_b - d_b V_a).
/// dv has layout (i,j) = d_j V_i.
Tensor nabla_bracket(const Tensor& dv);

/// Conformal curvature tensor (all-lower); requires n >= 3.
Tensor conformal_tensor(const CurvatureSet& c, const Tensor& g,
                        const Tensor& g_inv);

/// Projective curvature tensor (all-lower). The S-form bracket terms apply
/// to the semi-symmetric connection only and are dropped for the symmetric
/// one. H is the associated trace-correction tensor.
struct ProjectivePair {
  Tensor W;
  Tensor H;
};
ProjectivePair projective_tensor(const CurvatureSet& c, const Frame& f,
                                 Conn which);

/// K_ij = n S_ij + S_ji - (n+1) S g_ij, the trace correction that closes the
/// projective-tensor relation between the two connections. The sign of the
/// S g_ij term is fixed by expanding H via the Ricci relation; the +(n+1)S
/// variant leaves a residual of 2S/(n-1) (g_mk g_ij - g_mj g_ik).
Tensor projective_k_tensor(const Tensor& s_ij, double s_tr, const Tensor& g);

/// Residuals of the four algebraic curvature properties of the
/// semi-symmetric connection (antisymmetry, first-pair symmetry defect,
/// trace chain, cyclic sum).
std::map<std::string, double> curvature_properties(const CurvatureSet& sym,
                                                   const CurvatureSet& bar,
                                                   const Frame& f);

}  // namespace weyl
