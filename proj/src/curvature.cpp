#include "weylcalc/curvature.hpp"

namespace weyl {

Tensor riemann(const Frame& f, Conn which) {
  const Tensor& G = which == Conn::Symmetric ? f.gamma : f.gamma_bar;
  const Tensor& dG = which == Conn::Symmetric ? f.dgamma : f.dgamma_bar;
  const int n = G.dim();
  Tensor r(n, {Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower});
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = dG(h, i, k, j) - dG(h, i, j, k);
          for (int s = 0; s < n; ++s)
            v += G(h, s, j) * G(s, i, k) - G(h, s, k) * G(s, i, j);
          r(h, i, j, k) = v;
        }
  return r;
}

Tensor homothetic_trace(const Tensor& r_up) { return r_up.contract(0, 1); }

Tensor ricci_tensor(const Tensor& r_up) { return r_up.contract(0, 3); }

double scalar_curvature(const Tensor& ricci, const Tensor& g_inv) {
  const int n = ricci.dim();
  double r = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r += g_inv(i, j) * ricci(i, j);
  return r;
}

Tensor s_tensor(const Frame& f) {
  const int n = f.g.dim();
  Tensor cov = covariant_derivative_covector(f.S, f.dS, f.gamma);
  double s2 = 0;  // g^kr S_k S_r
  for (int k = 0; k < n; ++k)
    for (int r = 0; r < n; ++r) s2 += f.g_inv(k, r) * f.S(k) * f.S(r);
  Tensor out(n, {Variance::Lower, Variance::Lower});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = cov(i, j) - f.S(i) * f.S(j) + 0.5 * f.g(i, j) * s2;
  return out;
}

double s_trace(const Tensor& s_ij, const Tensor& g_inv) {
  return scalar_curvature(s_ij, g_inv);
}

CurvatureSet curvature_set(const Frame& f, Conn which) {
  CurvatureSet c;
  c.R_up = riemann(f, which);
  c.R_low = c.R_up.raise_lower(0, f.g, IndexMove::Lower);
  c.ricci = ricci_tensor(c.R_up);
  c.scalar = scalar_curvature(c.ricci, f.g_inv);

  const int n = f.g.dim();
  const double factor = c.scalar / (n * (n - 1.0));
  c.Z_up = c.R_up;
  c.Z_low = c.R_low;
  c.Z_ricci = c.ricci;
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          c.Z_up(h, i, j, k) -= factor * ((h == k ? f.g(i, j) : 0.0) -
                                          (h == j ? f.g(i, k) : 0.0));
          c.Z_low(h, i, j, k) -=
              factor * (f.g(h, k) * f.g(i, j) - f.g(h, j) * f.g(i, k));
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      c.Z_ricci(i, j) -= (c.scalar / n) * f.g(i, j);
  return c;
}

Tensor nabla_bracket(const Tensor& dv) {
  const int n = dv.dim();
  Tensor out(n, {Variance::Lower, Variance::Lower});
  // dv(i,j) = d_j V_i; out(a,b) = 1/2 (d_a V_b - d_b V_a)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = 0.5 * (dv(b, a) - dv(a, b));
  return out;
}

Tensor conformal_tensor(const CurvatureSet& c, const Tensor& g,
                        const Tensor& g_inv) {
  const int n = g.dim();
  if (n < 3)
    throw DimensionError("conformal tensor undefined for n = 2 (n-2 denominator)");
  const Tensor V = homothetic_trace(c.R_up);
  const Tensor& ric = c.ricci;
  const double R = c.scalar;
  Tensor out(n, {Variance::Lower, Variance::Lower, Variance::Lower, Variance::Lower});
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = c.R_low(m, i, j, k) - g(m, i) * V(j, k) / n;
          v += (g(m, j) * ric(i, k) - g(m, k) * ric(i, j) -
                g(i, j) * ric(m, k) + g(i, k) * ric(m, j)) /
               (n - 2.0);
          v -= (g(m, j) * V(k, i) - g(m, k) * V(j, i) - g(i, j) * V(k, m) +
                g(i, k) * V(j, m)) /
               (n * (n - 2.0));
          v -= R * (g(m, j) * g(i, k) - g(m, k) * g(i, j)) /
               ((n - 1.0) * (n - 2.0));
          out(m, i, j, k) = v;
        }
  (void)g_inv;
  return out;
}

ProjectivePair projective_tensor(const CurvatureSet& c, const Frame& f,
                                 Conn which) {
  const int n = f.g.dim();
  const Tensor& g = f.g;
  const Tensor& ric = c.ricci;
  // br(a,b) = nabla_[a S_b]; drops out entirely for the symmetric connection
  Tensor br(n, {Variance::Lower, Variance::Lower});
  if (which == Conn::SemiSymmetric) br = nabla_bracket(f.dS);

  ProjectivePair out;
  out.H = Tensor(n, {Variance::Lower, Variance::Lower});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.H(i, j) = n * ric(i, j) + ric(j, i) + 2.0 * (n - 1.0) * br(j, i);

  out.W = Tensor(n, {Variance::Lower, Variance::Lower, Variance::Lower, Variance::Lower});
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = c.R_low(m, i, j, k);
          v += g(m, i) / (n + 1.0) *
               ((ric(j, k) - ric(k, j)) + 2.0 * (n - 1.0) * br(j, k));
          v += (g(m, j) * out.H(i, k) - g(m, k) * out.H(i, j)) / (n * n - 1.0);
          out.W(m, i, j, k) = v;
        }
  return out;
}

Tensor projective_k_tensor(const Tensor& s_ij, double s_tr, const Tensor& g) {
  const int n = g.dim();
  Tensor k(n, {Variance::Lower, Variance::Lower});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k(i, j) = n * s_ij(i, j) + s_ij(j, i) - (n + 1.0) * s_tr * g(i, j);
  return k;
}

std::map<std::string, double> curvature_properties(const CurvatureSet& sym,
                                                   const CurvatureSet& bar,
                                                   const Frame& f) {
  const int n = f.g.dim();
  const Tensor& g = f.g;
  const Tensor tb = nabla_bracket(f.dT);  // nabla_[a T_b]
  const Tensor sb = nabla_bracket(f.dS);
  const Tensor vbar = homothetic_trace(bar.R_up);
  const Tensor vsym = homothetic_trace(sym.R_up);

  std::map<std::string, double> res;
  res["a_antisymmetry"] =
      (bar.R_low + bar.R_low.transpose_pair(2, 3)).max_abs();

  Tensor b(n, {Variance::Lower, Variance::Lower, Variance::Lower, Variance::Lower});
  Tensor d = b;
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          b(m, i, j, k) = bar.R_low(m, i, j, k) + bar.R_low(i, m, j, k) -
                          4.0 * g(m, i) * tb(k, j);
          d(m, i, j, k) = bar.R_low(m, i, j, k) + bar.R_low(m, j, k, i) +
                          bar.R_low(m, k, i, j) -
                          2.0 * (g(m, i) * sb(k, j) + g(m, j) * sb(i, k) +
                                 g(m, k) * sb(j, i));
        }
  res["b_pair_symmetry"] = b.max_abs();
  res["d_cyclic_sum"] = d.max_abs();

  res["c_trace_equality"] = (vbar - vsym).max_abs();
  Tensor ric_asym(n, {Variance::Lower, Variance::Lower});
  Tensor weyl_form_trace = ric_asym;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      ric_asym(j, k) = vsym(j, k) - (sym.ricci(k, j) - sym.ricci(j, k));
      weyl_form_trace(j, k) = vsym(j, k) - 2.0 * n * tb(k, j);
    }
  res["c_trace_vs_ricci"] = ric_asym.max_abs();
  res["c_trace_vs_weyl_form"] = weyl_form_trace.max_abs();
  return res;
}

}  // namespace weyl
