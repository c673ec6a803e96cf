#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "weylcalc/curvature.hpp"

using weyl::Conn;
using weyl::CurvatureSet;
using weyl::Frame;
using weyl::Point;
using weyl::Tensor;
using weyl::WeylManifold;
using testutil::make_manifold;

TEST_CASE("flat manifold has zero curvature") {
  WeylManifold m = testutil::flat2();
  Frame f = m.frame({{0.2, -0.3}});
  CHECK(weyl::riemann(f, Conn::Symmetric).max_abs() == 0.0);
  CurvatureSet c = weyl::curvature_set(f, Conn::SemiSymmetric);
  CHECK(c.R_up.max_abs() == 0.0);
  CHECK(c.ricci.max_abs() == 0.0);
  CHECK(c.scalar == 0.0);
  CHECK(c.Z_up.max_abs() == 0.0);
}

TEST_CASE("round sphere curvature oracle") {
  WeylManifold m = make_manifold({"x", "y"}, {{"1", "0"}, {"0", "sin(x)^2"}},
                                 {"0", "0"}, {"0", "0"});
  for (double x : {0.6, 0.9, 1.3}) {
    Frame f = m.frame({{x, 0.4}});
    CurvatureSet c = weyl::curvature_set(f, Conn::Symmetric);
    const double s2 = std::sin(x) * std::sin(x);
    REQUIRE(c.R_up(0, 1, 0, 1) == doctest::Approx(s2).epsilon(1e-12));
    REQUIRE(c.ricci(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    REQUIRE(c.ricci(1, 1) == doctest::Approx(-s2).epsilon(1e-12));
    REQUIRE(c.scalar == doctest::Approx(-2.0).epsilon(1e-12));
    // R_low = g R_up and scalar = g^ij R_ij, the CurvatureSet invariants.
    Tensor relow = c.R_up.raise_lower(0, f.g, weyl::IndexMove::Lower);
    REQUIRE((relow - c.R_low).max_abs() <= 1e-12);
    REQUIRE(std::fabs(weyl::scalar_curvature(c.ricci, f.g_inv) - c.scalar) <=
            1e-12);
  }
}

TEST_CASE("curvature is antisymmetric in the last index pair") {
  WeylManifold m = testutil::curved3();
  Frame f = m.frame({{0.3, -0.2, 0.1}});
  for (Conn which : {Conn::Symmetric, Conn::SemiSymmetric}) {
    Tensor r = weyl::riemann(f, which);
    const int n = 3;
    for (int h = 0; h < n; ++h)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            REQUIRE(std::fabs(r(h, i, j, k) + r(h, i, k, j)) <= 1e-13);
  }
}

TEST_CASE("s_tensor on the proportional witness field") {
  // Flat g, T = 0, S_i = -b_i/(1 + b.x) with b = (1, 0): the deformation
  // tensor is (1/(2(1+x)^2)) g_ij.
  WeylManifold m = testutil::flat2("0", "0", "-1/(1 + x)", "0");
  {
    Frame f = m.frame({{0.0, 0.0}});
    Tensor s = weyl::s_tensor(f);
    CHECK(s(0, 0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(s(1, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::fabs(s(0, 1)) <= 1e-14);
    CHECK(std::fabs(s(1, 0)) <= 1e-14);
  }
  for (double x : {-0.3, 0.2, 0.45}) {
    Frame f = m.frame({{x, 0.1}});
    Tensor s = weyl::s_tensor(f);
    const double beta = 1.0 / (2.0 * (1.0 + x) * (1.0 + x));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        REQUIRE(std::fabs(s(i, j) - beta * f.g(i, j)) <= 1e-12);
  }
}

TEST_CASE("s_tensor zero field and non-proportional field") {
  WeylManifold m0 = testutil::flat2();
  CHECK(weyl::s_tensor(m0.frame({{0.1, 0.4}})).max_abs() == 0.0);

  // S = (x^2-coordinate, 0), i.e. S_1 = y: the off-diagonal entry carries
  // d_2 S_1 = 1 and proportionality fails at generic points.
  WeylManifold m = testutil::flat2("0", "0", "y", "0");
  Frame f = m.frame({{0.3, 0.2}});
  Tensor s = weyl::s_tensor(f);
  double beta = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) beta += f.g_inv(i, j) * s(i, j);
  beta /= 2.0;
  double resid = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      resid = std::max(resid, std::fabs(s(i, j) - beta * f.g(i, j)));
  CHECK(resid > 1e-3);
}

TEST_CASE("nabla_bracket uses the one-half normalization") {
  WeylManifold m = testutil::flat2("0", "0", "y", "0");
  Frame f = m.frame({{0.1, 0.7}});
  Tensor br = weyl::nabla_bracket(f.dS);
  // S = (y, 0): d_2 S_1 = 1, so bracket(1,2) = 1/2 (d_1 S_2 - d_2 S_1) = -1/2.
  CHECK(br(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(br(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("curvature relation between the two connections") {
  WeylManifold m = testutil::curved3();
  for (const Point& p : testutil::grid_points3()) {
    Frame f = m.frame(p);
    CurvatureSet sym = weyl::curvature_set(f, Conn::Symmetric);
    CurvatureSet bar = weyl::curvature_set(f, Conn::SemiSymmetric);
    Tensor s_ij = weyl::s_tensor(f);
    const double s_tr = weyl::s_trace(s_ij, f.g_inv);
    Tensor s_up = s_ij.raise_lower(0, f.g_inv, weyl::IndexMove::Raise);
    const int n = 3;
    for (int h = 0; h < n; ++h)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double law = sym.R_up(h, i, j, k);
            if (h == k) law += s_ij(i, j);
            if (h == j) law -= s_ij(i, k);
            law += f.g(i, j) * s_up(h, k) - f.g(i, k) * s_up(h, j);
            REQUIRE(std::fabs(bar.R_up(h, i, j, k) - law) <= 1e-11);

            double low = sym.R_low(h, i, j, k) + f.g(h, k) * s_ij(i, j) -
                         f.g(h, j) * s_ij(i, k) + f.g(i, j) * s_ij(h, k) -
                         f.g(i, k) * s_ij(h, j);
            REQUIRE(std::fabs(bar.R_low(h, i, j, k) - low) <= 1e-11);
          }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        REQUIRE(std::fabs(bar.ricci(i, j) - sym.ricci(i, j) -
                          (n - 2.0) * s_ij(i, j) - s_tr * f.g(i, j)) <= 1e-11);
    REQUIRE(std::fabs(bar.scalar - sym.scalar - 2.0 * (n - 1.0) * s_tr) <=
            1e-10);
  }
}

TEST_CASE("curvature properties of the semi-symmetric connection") {
  WeylManifold m = testutil::curved3();
  for (const Point& p : testutil::grid_points3()) {
    Frame f = m.frame(p);
    CurvatureSet sym = weyl::curvature_set(f, Conn::Symmetric);
    CurvatureSet bar = weyl::curvature_set(f, Conn::SemiSymmetric);
    auto props = weyl::curvature_properties(sym, bar, f);
    for (const auto& [name, resid] : props) {
      INFO(name);
      REQUIRE(resid <= 1e-10);
    }
  }
}

TEST_CASE("property d reduces to the first Bianchi identity when T = S = 0") {
  WeylManifold m = make_manifold(
      {"x", "y", "z"},
      {{"1", "0", "0"}, {"0", "1 + x^2", "0"}, {"0", "0", "1 + y^2"}},
      {"0", "0", "0"}, {"0", "0", "0"});
  Frame f = m.frame({{0.3, -0.2, 0.4}});
  CurvatureSet c = weyl::curvature_set(f, Conn::SemiSymmetric);
  const int n = 3;
  for (int mm = 0; mm < n; ++mm)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          REQUIRE(std::fabs(c.R_low(mm, i, j, k) + c.R_low(mm, j, k, i) +
                            c.R_low(mm, k, i, j)) <= 1e-12);
}

TEST_CASE("conformal tensor equality and dimension guard") {
  WeylManifold m2 = testutil::flat2("0.1", "0", "0.2", "0");
  Frame f2 = m2.frame({{0.1, 0.2}});
  CurvatureSet c2 = weyl::curvature_set(f2, Conn::Symmetric);
  CHECK_THROWS_AS(weyl::conformal_tensor(c2, f2.g, f2.g_inv),
                  weyl::DimensionError);

  WeylManifold m = testutil::curved3();
  for (const Point& p : testutil::grid_points3()) {
    Frame f = m.frame(p);
    CurvatureSet sym = weyl::curvature_set(f, Conn::Symmetric);
    CurvatureSet bar = weyl::curvature_set(f, Conn::SemiSymmetric);
    Tensor c_sym = weyl::conformal_tensor(sym, f.g, f.g_inv);
    Tensor c_bar = weyl::conformal_tensor(bar, f.g, f.g_inv);
    REQUIRE((c_bar - c_sym).max_abs() <= 1e-10);
  }
}

TEST_CASE("projective tensors and the trace-correction relation") {
  // S = 0: the two projective tensors coincide.
  WeylManifold m0 = make_manifold(
      {"x", "y", "z"},
      {{"1", "0", "0"}, {"0", "1 + x^2", "0"}, {"0", "0", "1 + y^2"}},
      {"0.1*y", "0.1*x", "0"}, {"0", "0", "0"});
  {
    Frame f = m0.frame({{0.2, 0.3, -0.1}});
    CurvatureSet sym = weyl::curvature_set(f, Conn::Symmetric);
    CurvatureSet bar = weyl::curvature_set(f, Conn::SemiSymmetric);
    auto pw = weyl::projective_tensor(sym, f, Conn::Symmetric);
    auto pwb = weyl::projective_tensor(bar, f, Conn::SemiSymmetric);
    CHECK((pwb.W - pw.W).max_abs() <= 1e-12);
  }

  // Generic S: the displayed relation with K_ij closes.
  WeylManifold m = testutil::curved3();
  for (const Point& p : testutil::grid_points3()) {
    Frame f = m.frame(p);
    CurvatureSet sym = weyl::curvature_set(f, Conn::Symmetric);
    CurvatureSet bar = weyl::curvature_set(f, Conn::SemiSymmetric);
    Tensor s_ij = weyl::s_tensor(f);
    const double s_tr = weyl::s_trace(s_ij, f.g_inv);
    auto pw = weyl::projective_tensor(sym, f, Conn::Symmetric);
    auto pwb = weyl::projective_tensor(bar, f, Conn::SemiSymmetric);
    Tensor k_ij = weyl::projective_k_tensor(s_ij, s_tr, f.g);
    Tensor sb = weyl::nabla_bracket(f.dS);
    const int n = 3;
    for (int mm = 0; mm < n; ++mm)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double law = pw.W(mm, i, j, k) +
                         2.0 / (n + 1.0) * f.g(mm, i) * sb(j, k) +
                         (f.g(mm, k) * k_ij(i, j) - f.g(mm, j) * k_ij(i, k)) /
                             (n * n - 1.0) +
                         f.g(i, j) * s_ij(mm, k) - f.g(i, k) * s_ij(mm, j);
            REQUIRE(std::fabs(pwb.W(mm, i, j, k) - law) <= 1e-11);
          }
  }
}

TEST_CASE("concircular tensor relations and Lemma 2.1") {
  WeylManifold m = testutil::curved3();
  for (const Point& p : testutil::grid_points3()) {
    Frame f = m.frame(p);
    CurvatureSet sym = weyl::curvature_set(f, Conn::Symmetric);
    CurvatureSet bar = weyl::curvature_set(f, Conn::SemiSymmetric);
    Tensor s_ij = weyl::s_tensor(f);
    const double s_tr = weyl::s_trace(s_ij, f.g_inv);
    const int n = 3;

    // Z definition cross-check against its displayed formula.
    for (int h = 0; h < n; ++h)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const double zref =
                sym.R_up(h, i, j, k) -
                sym.scalar / (n * (n - 1.0)) *
                    ((h == k ? f.g(i, j) : 0.0) - (h == j ? f.g(i, k) : 0.0));
            REQUIRE(std::fabs(sym.Z_up(h, i, j, k) - zref) <= 1e-12);
          }

    // Z ricci relation between the connections.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        REQUIRE(std::fabs(bar.Z_ricci(i, j) - sym.Z_ricci(i, j) -
                          (n - 2.0) * s_ij(i, j) +
                          (n - 2.0) / n * f.g(i, j) * s_tr) <= 1e-11);

    // Lemma 2.1 (a), (b), (c), (d).
    Tensor tbr = weyl::nabla_bracket(f.dT);
    Tensor sbr = weyl::nabla_bracket(f.dS);
    for (int mm = 0; mm < n; ++mm)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            REQUIRE(std::fabs(bar.Z_low(mm, i, j, k) +
                              bar.Z_low(mm, i, k, j)) <= 1e-11);
            REQUIRE(std::fabs(bar.Z_low(mm, i, j, k) +
                              bar.Z_low(i, mm, j, k) -
                              4.0 * f.g(mm, i) * tbr(k, j)) <= 1e-11);
            const double cyc = bar.Z_low(mm, i, j, k) +
                               bar.Z_low(mm, j, k, i) +
                               bar.Z_low(mm, k, i, j);
            const double rhs =
                2.0 * (f.g(mm, i) * sbr(k, j) + f.g(mm, j) * sbr(i, k) +
                       f.g(mm, k) * sbr(j, i));
            REQUIRE(std::fabs(cyc - rhs) <= 1e-11);
          }
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double ztr = 0.0, rtr = 0.0;
        for (int r = 0; r < n; ++r) {
          ztr += bar.Z_up(r, r, j, k);
          rtr += bar.R_up(r, r, j, k);
        }
        REQUIRE(std::fabs(ztr - rtr) <= 1e-11);
      }
  }
}

TEST_CASE("homothetic trace equals the T-form bracket chain") {
  WeylManifold m = testutil::curved3();
  Frame f = m.frame({{0.15, -0.25, 0.35}});
  CurvatureSet sym = weyl::curvature_set(f, Conn::Symmetric);
  CurvatureSet bar = weyl::curvature_set(f, Conn::SemiSymmetric);
  Tensor vbar = weyl::homothetic_trace(bar.R_up);
  Tensor vsym = weyl::homothetic_trace(sym.R_up);
  Tensor tbr = weyl::nabla_bracket(f.dT);
  const int n = 3;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      REQUIRE(std::fabs(vbar(j, k) - vsym(j, k)) <= 1e-11);
      REQUIRE(std::fabs(vsym(j, k) -
                        (sym.ricci(k, j) - sym.ricci(j, k))) <= 1e-11);
      REQUIRE(std::fabs(vsym(j, k) - 2.0 * n * tbr(k, j)) <= 1e-11);
    }
}
