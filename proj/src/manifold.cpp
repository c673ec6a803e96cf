#include "weylcalc/manifold.hpp"

#include <stdexcept>

namespace weyl {

namespace {

// determinant of a symbolic matrix by cofactor expansion (n <= 4 in practice)
ScalarField sym_det(const std::vector<std::vector<ScalarField>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  ScalarField acc = ScalarField::constant(0.0, a[0][0].names_ptr());
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<ScalarField>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<ScalarField> row;
      for (std::size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(a[r][cc]);
      minor.push_back(std::move(row));
    }
    ScalarField term = a[0][c] * sym_det(minor);
    acc = (c % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

ScalarField sym_cofactor(const std::vector<std::vector<ScalarField>>& a, int i,
                         int j) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<ScalarField>> minor;
  for (int r = 0; r < n; ++r) {
    if (r == i) continue;
    std::vector<ScalarField> row;
    for (int c = 0; c < n; ++c)
      if (c != j) row.push_back(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    minor.push_back(std::move(row));
  }
  ScalarField d = minor.empty()
                      ? ScalarField::constant(1.0, a[0][0].names_ptr())
                      : sym_det(minor);
  return ((i + j) % 2 == 0) ? d : -d;
}

}  // namespace

WeylManifold::WeylManifold(std::vector<std::string> coords,
                           std::vector<std::vector<ScalarField>> g,
                           std::vector<ScalarField> T,
                           std::vector<ScalarField> S,
                           std::optional<GammaBarPerturbation> fault)
    : n_(static_cast<int>(coords.size())),
      coords_(std::move(coords)),
      g_(std::move(g)),
      T_(std::move(T)),
      S_(std::move(S)) {
  if (n_ < 2) throw DimensionError("manifold dimension must be at least 2");
  if (g_.size() != static_cast<std::size_t>(n_) ||
      T_.size() != static_cast<std::size_t>(n_) ||
      S_.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("metric/form sizes do not match dimension");
  for (auto& row : g_)
    if (row.size() != static_cast<std::size_t>(n_))
      throw std::invalid_argument("metric row size does not match dimension");
  names_ = g_[0][0].names_ptr();

  const int n = n_;
  auto at3 = [n](int i, int j, int k) {
    return static_cast<std::size_t>((i * n + j) * n + k);
  };

  // symbolic inverse metric via adjugate / determinant
  ScalarField det = sym_det(g_);
  g_inv_.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g_inv_.push_back(sym_cofactor(g_, j, i) / det);

  dg_.reserve(static_cast<std::size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        dg_.push_back(g_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].differentiate(k));

  for (int i = 0; i < n; ++i) {
    ScalarField acc = ScalarField::constant(0.0, names_);
    for (int m = 0; m < n; ++m)
      acc = acc + g_inv_[static_cast<std::size_t>(i * n + m)] * S_[static_cast<std::size_t>(m)];
    s_up_.push_back(acc);
  }

  // {i jk} = 1/2 g^im (d_j g_mk + d_k g_mj - d_m g_jk)
  const ScalarField half = ScalarField::constant(0.5, names_);
  gamma_lc_.resize(static_cast<std::size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        ScalarField acc = ScalarField::constant(0.0, names_);
        for (int m = 0; m < n; ++m) {
          ScalarField inner = dg_[at3(m, k, j)] + dg_[at3(m, j, k)] - dg_[at3(j, k, m)];
          acc = acc + g_inv_[static_cast<std::size_t>(i * n + m)] * inner;
        }
        gamma_lc_[at3(i, j, k)] = half * acc;
      }

  // Gamma^i_jk = {i jk} - delta^i_j T_k - delta^i_k T_j + g_jk T^i
  std::vector<ScalarField> t_up;
  for (int i = 0; i < n; ++i) {
    ScalarField acc = ScalarField::constant(0.0, names_);
    for (int m = 0; m < n; ++m)
      acc = acc + g_inv_[static_cast<std::size_t>(i * n + m)] * T_[static_cast<std::size_t>(m)];
    t_up.push_back(acc);
  }
  gamma_.resize(static_cast<std::size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        ScalarField acc = gamma_lc_[at3(i, j, k)];
        if (i == j) acc = acc - T_[static_cast<std::size_t>(k)];
        if (i == k) acc = acc - T_[static_cast<std::size_t>(j)];
        acc = acc + g_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * t_up[static_cast<std::size_t>(i)];
        gamma_[at3(i, j, k)] = acc;
      }

  // Gammabar^i_jk = Gamma^i_jk + delta^i_k S_j - g_jk S^i
  gamma_bar_.resize(static_cast<std::size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        ScalarField acc = gamma_[at3(i, j, k)];
        if (i == k) acc = acc + S_[static_cast<std::size_t>(j)];
        acc = acc - g_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * s_up_[static_cast<std::size_t>(i)];
        gamma_bar_[at3(i, j, k)] = acc;
      }
  if (fault) {
    auto& f = *fault;
    gamma_bar_[at3(f.i, f.j, f.k)] =
        gamma_bar_[at3(f.i, f.j, f.k)] + ScalarField::constant(f.eps, names_);
  }

  dT_.reserve(static_cast<std::size_t>(n * n));
  dS_.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      dT_.push_back(T_[static_cast<std::size_t>(i)].differentiate(k));
      dS_.push_back(S_[static_cast<std::size_t>(i)].differentiate(k));
    }

  dgamma_.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n * n * n));
  dgamma_bar_.reserve(dgamma_.capacity());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          dgamma_.push_back(gamma_[at3(i, j, k)].differentiate(l));
          dgamma_bar_.push_back(gamma_bar_[at3(i, j, k)].differentiate(l));
        }
}

const ScalarField& WeylManifold::gamma_field(int i, int j, int k) const {
  return gamma_[static_cast<std::size_t>((i * n_ + j) * n_ + k)];
}

const ScalarField& WeylManifold::gamma_bar_field(int i, int j, int k) const {
  return gamma_bar_[static_cast<std::size_t>((i * n_ + j) * n_ + k)];
}

Frame WeylManifold::frame(const Point& p) const {
  if (p.coords.size() != static_cast<std::size_t>(n_))
    throw EvalError("point dimension does not match manifold dimension");
  const int n = n_;
  EvalCache cache;
  auto ev = [&](const ScalarField& f) { return f.evaluate(p.coords, cache); };

  Frame fr;
  fr.point = p;
  fr.g = Tensor(n, {Variance::Lower, Variance::Lower});
  fr.dg = Tensor(n, {Variance::Lower, Variance::Lower, Variance::Lower});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      fr.g(i, j) = ev(g_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      for (int k = 0; k < n; ++k)
        fr.dg(i, j, k) = ev(dg_[static_cast<std::size_t>((i * n + j) * n + k)]);
    }
  fr.g_inv = invert_metric(fr.g);

  fr.T = Tensor(n, {Variance::Lower});
  fr.S = Tensor(n, {Variance::Lower});
  fr.S_up = Tensor(n, {Variance::Upper});
  fr.dT = Tensor(n, {Variance::Lower, Variance::Lower});
  fr.dS = Tensor(n, {Variance::Lower, Variance::Lower});
  for (int i = 0; i < n; ++i) {
    fr.T(i) = ev(T_[static_cast<std::size_t>(i)]);
    fr.S(i) = ev(S_[static_cast<std::size_t>(i)]);
    fr.S_up(i) = ev(s_up_[static_cast<std::size_t>(i)]);
    for (int k = 0; k < n; ++k) {
      fr.dT(i, k) = ev(dT_[static_cast<std::size_t>(i * n + k)]);
      fr.dS(i, k) = ev(dS_[static_cast<std::size_t>(i * n + k)]);
    }
  }

  const std::vector<Variance> v3 = {Variance::Upper, Variance::Lower, Variance::Lower};
  const std::vector<Variance> v4 = {Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower};
  fr.gamma_lc = Tensor(n, v3);
  fr.gamma = Tensor(n, v3);
  fr.gamma_bar = Tensor(n, v3);
  fr.dgamma = Tensor(n, v4);
  fr.dgamma_bar = Tensor(n, v4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t f3 = static_cast<std::size_t>((i * n + j) * n + k);
        fr.gamma_lc(i, j, k) = ev(gamma_lc_[f3]);
        fr.gamma(i, j, k) = ev(gamma_[f3]);
        fr.gamma_bar(i, j, k) = ev(gamma_bar_[f3]);
        for (int l = 0; l < n; ++l) {
          const std::size_t f4 = f3 * static_cast<std::size_t>(n) + static_cast<std::size_t>(l);
          fr.dgamma(i, j, k, l) = ev(dgamma_[f4]);
          fr.dgamma_bar(i, j, k, l) = ev(dgamma_bar_[f4]);
        }
      }
  return fr;
}

std::uint64_t WeylManifold::digest() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(n_));
  for (const auto& row : g_)
    for (const auto& f : row) mix(field_digest(f));
  for (const auto& f : T_) mix(field_digest(f));
  for (const auto& f : S_) mix(field_digest(f));
  return h;
}

Tensor levi_civita(const WeylManifold& m, const Point& p) {
  return m.frame(p).gamma_lc;
}

Tensor weyl_connection(const WeylManifold& m, const Point& p) {
  return m.frame(p).gamma;
}

Tensor ssnm_connection(const WeylManifold& m, const Point& p) {
  return m.frame(p).gamma_bar;
}

Tensor compatibility_residual(const Frame& f) {
  const int n = f.g.dim();
  Tensor res(n, {Variance::Lower, Variance::Lower, Variance::Lower});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = f.dg(i, j, k) - 2.0 * f.g(i, j) * f.T(k);
        for (int r = 0; r < n; ++r)
          v -= f.gamma(r, i, k) * f.g(r, j) + f.gamma(r, j, k) * f.g(i, r);
        res(i, j, k) = v;
      }
  return res;
}

Tensor compatibility_residual(const WeylManifold& m, const Point& p) {
  return compatibility_residual(m.frame(p));
}

Tensor torsion(const Tensor& gamma_bar) {
  return gamma_bar - gamma_bar.transpose_pair(1, 2);
}

Tensor covariant_derivative_covector(const Tensor& values, const Tensor& dvalues,
                                     const Tensor& gamma) {
  const int n = values.dim();
  Tensor out(n, {Variance::Lower, Variance::Lower});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = dvalues(i, j);
      for (int r = 0; r < n; ++r) v -= gamma(r, i, j) * values(r);
      out(i, j) = v;
    }
  return out;
}

Tensor covariant_derivative_covector(const WeylManifold& m, const Point& p,
                                     const std::vector<ScalarField>& field,
                                     const Tensor& gamma) {
  const int n = m.dim();
  Tensor vals(n, {Variance::Lower});
  Tensor dvals(n, {Variance::Lower, Variance::Lower});
  EvalCache cache;
  for (int i = 0; i < n; ++i) {
    vals(i) = field[static_cast<std::size_t>(i)].evaluate(p.coords, cache);
    for (int j = 0; j < n; ++j)
      dvals(i, j) = field[static_cast<std::size_t>(i)].differentiate(j).evaluate(p.coords, cache);
  }
  return covariant_derivative_covector(vals, dvals, gamma);
}

WeylManifold gauge_rescale(const WeylManifold& m, const ScalarField& lambda) {
  const int n = m.dim();
  ScalarField lam2 = lambda * lambda;
  std::vector<std::vector<ScalarField>> g2(static_cast<std::size_t>(n),
                                           std::vector<ScalarField>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      ScalarField e = lam2 * m.metric_fields()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      g2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
      g2[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = e;
    }
  ScalarField log_lambda = ln(lambda);
  std::vector<ScalarField> T2;
  for (int k = 0; k < n; ++k)
    T2.push_back(m.weyl_form()[static_cast<std::size_t>(k)] + log_lambda.differentiate(k));
  return WeylManifold(m.coords(), std::move(g2), std::move(T2),
                      m.connection_form());
}

}  // namespace weyl
