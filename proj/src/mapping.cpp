#include "weylcalc/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

namespace weyl {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

/// Evaluate a covector field and its partials at a point.
/// vals(i) = V_i, dvals(i,j) = d_j V_i.
void eval_covector(const std::vector<ScalarField>& field, const Point& p,
                   Tensor& vals, Tensor& dvals) {
  const int n = vals.dim();
  EvalCache cache;
  for (int i = 0; i < n; ++i) {
    vals(i) = field[u(i)].evaluate(p.coords, cache);
    for (int j = 0; j < n; ++j)
      dvals(i, j) = field[u(i)].differentiate(j).evaluate(p.coords, cache);
  }
}

double inner(const Tensor& g_inv, const Tensor& a, const Tensor& b) {
  const int n = g_inv.dim();
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int r = 0; r < n; ++r) s += g_inv(k, r) * a(k) * b(r);
  return s;
}

Tensor raise(const Tensor& g_inv, const Tensor& v) {
  const int n = g_inv.dim();
  Tensor out(n, {Variance::Upper});
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += g_inv(i, r) * v(r);
    out(i) = s;
  }
  return out;
}

}  // namespace

ConformalMapping identity_mapping(const WeylManifold& m) {
  ConformalMapping map;
  ScalarField zero = ScalarField::constant(0.0, m.names_ptr());
  map.P.assign(u(m.dim()), zero);
  map.Q.assign(u(m.dim()), zero);
  return map;
}

WeylManifold apply_mapping(const WeylManifold& m, const ConformalMapping& map) {
  const int n = m.dim();
  std::vector<ScalarField> T2, S2;
  T2.reserve(u(n));
  S2.reserve(u(n));
  for (int i = 0; i < n; ++i) {
    T2.push_back(m.weyl_form()[u(i)] - map.P[u(i)]);
    S2.push_back(m.connection_form()[u(i)] - map.Q[u(i)]);
  }
  return WeylManifold(m.coords(), m.metric_fields(), std::move(T2),
                      std::move(S2));
}

MappingFrame mapping_frame(const ConformalMapping& map, const Frame& f) {
  const int n = f.g.dim();
  MappingFrame mf;
  mf.P_vals = Tensor(n, {Variance::Lower});
  mf.Q_vals = Tensor(n, {Variance::Lower});
  mf.dP = Tensor(n, {Variance::Lower, Variance::Lower});
  Tensor dQ(n, {Variance::Lower, Variance::Lower});
  eval_covector(map.P, f.point, mf.P_vals, mf.dP);
  eval_covector(map.Q, f.point, mf.Q_vals, dQ);

  Tensor covP = covariant_derivative_covector(mf.P_vals, mf.dP, f.gamma);
  Tensor covQ = covariant_derivative_covector(mf.Q_vals, dQ, f.gamma);
  const double p2 = inner(f.g_inv, mf.P_vals, mf.P_vals);
  const double q2 = inner(f.g_inv, mf.Q_vals, mf.Q_vals);
  mf.pq = inner(f.g_inv, mf.P_vals, mf.Q_vals);

  mf.P_ij = Tensor(n, {Variance::Lower, Variance::Lower});
  mf.Q_ij = mf.P_ij;
  mf.P_under = mf.P_ij;
  mf.Q_under = mf.P_ij;
  mf.W = mf.P_ij;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double pi = mf.P_vals(i), pj = mf.P_vals(j);
      const double qi = mf.Q_vals(i), qj = mf.Q_vals(j);
      mf.P_ij(i, j) = covP(i, j) - pi * pj + 0.5 * f.g(i, j) * p2;
      mf.Q_ij(i, j) = covQ(i, j) + qi * qj - 0.5 * f.g(i, j) * q2;
      mf.P_under(i, j) = mf.P_ij(i, j) - pi * f.S(j);
      mf.Q_under(i, j) = mf.Q_ij(i, j) - qi * f.S(j);
      mf.W(i, j) = mf.P_under(i, j) - mf.Q_under(i, j) + pi * qj + pj * qi;
    }

  double tr = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tr += f.g_inv(i, j) * mf.W(i, j);
  mf.phi = tr / n;
  return mf;
}

MappingFrame mapping_frame(const WeylManifold& m, const ConformalMapping& map,
                           const Point& p) {
  return mapping_frame(map, m.frame(p));
}

ConcircularCheck is_concircular(const WeylManifold& m,
                                const ConformalMapping& map,
                                const std::vector<Point>& points, double tol) {
  const int n = m.dim();
  ConcircularCheck out;
  out.phi.reserve(points.size());
  for (const Point& p : points) {
    Frame f = m.frame(p);
    MappingFrame mf = mapping_frame(map, f);
    out.phi.push_back(mf.phi);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double r = std::fabs(mf.W(i, j) - mf.phi * f.g(i, j));
        if (r > out.max_residual) out.max_residual = r;
      }
  }
  out.concircular = out.max_residual <= tol;
  return out;
}

MappingLawResiduals mapping_law_residuals_at(const ConformalMapping& map,
                                             const Frame& f, const Frame& ft) {
  const int n = f.g.dim();
  MappingLawResiduals res;
  MappingFrame mf = mapping_frame(map, f);
  Tensor p_up = raise(f.g_inv, mf.P_vals);
  Tensor q_up = raise(f.g_inv, mf.Q_vals);

  // Coefficient laws for both connections.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double law = f.gamma(i, j, k);
        if (i == j) law += mf.P_vals(k);
        if (i == k) law += mf.P_vals(j);
        law -= f.g(j, k) * p_up(i);
        res.gamma_sym = std::max(res.gamma_sym,
                                 std::fabs(ft.gamma(i, j, k) - law));

        double lawb = f.gamma_bar(i, j, k);
        if (i == j) lawb += mf.P_vals(k);
        if (i == k) lawb += mf.P_vals(j) - mf.Q_vals(j);
        lawb -= f.g(j, k) * (p_up(i) - q_up(i));
        res.gamma_bar = std::max(res.gamma_bar,
                                 std::fabs(ft.gamma_bar(i, j, k) - lawb));
      }

  // Curvature laws. The starred tensors come from the target manifold's own
  // connection fields; the right-hand sides use only source data.
  Tensor r_sym = riemann(f, Conn::Symmetric);
  Tensor r_bar = riemann(f, Conn::SemiSymmetric);
  Tensor r_sym_t = riemann(ft, Conn::Symmetric);
  Tensor r_bar_t = riemann(ft, Conn::SemiSymmetric);

  Tensor br = nabla_bracket(mf.dP);  // br(a,b) = nabla_[a P_b]
  Tensor p_ij_up = mf.P_ij.raise_lower(0, f.g_inv, IndexMove::Raise);

  // Deformation tensor of the semi-symmetric law. This is W with P_ij and
  // Q_ij taken w.r.t. the semi-symmetric covariant derivative, which shifts
  // W by S_i (Q_j - P_j) + (<P,S> - <Q,S>) g_ij; for Q = P both variants
  // coincide. Verified as the exact closing form of the dual pipeline.
  const double ps = inner(f.g_inv, mf.P_vals, f.S);
  const double qs = inner(f.g_inv, mf.Q_vals, f.S);
  Tensor wb(n, {Variance::Lower, Variance::Lower});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      wb(i, j) = mf.W(i, j) + f.S(i) * (mf.Q_vals(j) - mf.P_vals(j)) +
                 (ps - qs) * f.g(i, j);
  Tensor wb_up = wb.raise_lower(0, f.g_inv, IndexMove::Raise);

  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double law = r_sym(h, i, j, k);
          if (h == i) law += 2.0 * br(j, k);
          if (h == k) law += mf.P_ij(i, j);
          if (h == j) law -= mf.P_ij(i, k);
          law += f.g(i, j) * p_ij_up(h, k) - f.g(i, k) * p_ij_up(h, j);
          res.riemann_sym = std::max(res.riemann_sym,
                                     std::fabs(r_sym_t(h, i, j, k) - law));

          double lawb = r_bar(h, i, j, k);
          if (h == i) lawb += 2.0 * br(j, k);
          if (h == k) lawb += wb(i, j) - 2.0 * mf.pq * f.g(i, j);
          if (h == j) lawb -= wb(i, k) - 2.0 * mf.pq * f.g(i, k);
          lawb += f.g(i, j) * wb_up(h, k) - f.g(i, k) * wb_up(h, j);
          res.riemann_bar = std::max(res.riemann_bar,
                                     std::fabs(r_bar_t(h, i, j, k) - lawb));
        }

  // The underlined tensors are definitional; re-derive them from the parts.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      res.under_p = std::max(res.under_p,
                             std::fabs(mf.P_under(i, j) -
                                       (mf.P_ij(i, j) - mf.P_vals(i) * f.S(j))));
      res.under_q = std::max(res.under_q,
                             std::fabs(mf.Q_under(i, j) -
                                       (mf.Q_ij(i, j) - mf.Q_vals(i) * f.S(j))));
    }
  return res;
}

MappingLawResiduals mapping_law_residuals(const WeylManifold& m,
                                          const ConformalMapping& map,
                                          const std::vector<Point>& points) {
  MappingLawResiduals res;
  WeylManifold target = apply_mapping(m, map);
  for (const Point& p : points) {
    MappingLawResiduals r =
        mapping_law_residuals_at(map, m.frame(p), target.frame(p));
    res.gamma_sym = std::max(res.gamma_sym, r.gamma_sym);
    res.riemann_sym = std::max(res.riemann_sym, r.riemann_sym);
    res.gamma_bar = std::max(res.gamma_bar, r.gamma_bar);
    res.riemann_bar = std::max(res.riemann_bar, r.riemann_bar);
    res.under_p = std::max(res.under_p, r.under_p);
    res.under_q = std::max(res.under_q, r.under_q);
  }
  return res;
}

ConcircularResiduals concircular_residuals_at(const ConformalMapping& map,
                                              const Frame& f, const Frame& ft) {
  const int n = f.g.dim();
  ConcircularResiduals res;
  MappingFrame mf = mapping_frame(map, f);
  CurvatureSet bar = curvature_set(f, Conn::SemiSymmetric);
  CurvatureSet bar_t = curvature_set(ft, Conn::SemiSymmetric);
  const double shift = mf.phi - mf.pq;

  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double law = bar.R_up(h, i, j, k);
          if (h == k) law += 2.0 * shift * f.g(i, j);
          if (h == j) law -= 2.0 * shift * f.g(i, k);
          res.riemann_shift = std::max(res.riemann_shift,
                                       std::fabs(bar_t.R_up(h, i, j, k) - law));
          res.z_invariance =
              std::max(res.z_invariance,
                       std::fabs(bar_t.Z_up(h, i, j, k) - bar.Z_up(h, i, j, k)));
        }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      res.ricci_shift = std::max(
          res.ricci_shift, std::fabs(bar_t.ricci(i, j) - bar.ricci(i, j) -
                                     2.0 * (n - 1.0) * shift * f.g(i, j)));

  res.scalar_shift =
      std::fabs(bar_t.scalar - bar.scalar - 2.0 * n * (n - 1.0) * shift);
  return res;
}

NotConcircularError::NotConcircularError(double r)
    : std::runtime_error("mapping is not concircular (proportionality "
                         "residual " +
                         format_double(r) + ")"),
      residual(r) {}

ConcircularResiduals concircular_invariance_residual(
    const WeylManifold& m, const ConformalMapping& map,
    const std::vector<Point>& points, double tol) {
  ConcircularCheck check = is_concircular(m, map, points, tol);
  if (!check.concircular) throw NotConcircularError(check.max_residual);

  ConcircularResiduals res;
  WeylManifold target = apply_mapping(m, map);
  for (const Point& p : points) {
    ConcircularResiduals r =
        concircular_residuals_at(map, m.frame(p), target.frame(p));
    res.riemann_shift = std::max(res.riemann_shift, r.riemann_shift);
    res.ricci_shift = std::max(res.ricci_shift, r.ricci_shift);
    res.scalar_shift = std::max(res.scalar_shift, r.scalar_shift);
    res.z_invariance = std::max(res.z_invariance, r.z_invariance);
  }
  return res;
}

}  // namespace weyl
