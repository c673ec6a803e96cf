#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "weylcalc/mapping.hpp"

using weyl::ConformalMapping;
using weyl::Point;
using weyl::ScalarField;
using weyl::Tensor;
using weyl::WeylManifold;
using testutil::make_manifold;

namespace {

ConformalMapping parse_mapping(const WeylManifold& m,
                               const std::vector<std::string>& p,
                               const std::vector<std::string>& q) {
  ConformalMapping map;
  for (const auto& e : p) map.P.push_back(ScalarField::parse(e, m.coords()));
  for (const auto& e : q) map.Q.push_back(ScalarField::parse(e, m.coords()));
  return map;
}

}  // namespace

TEST_CASE("identity mapping leaves the connection unchanged") {
  WeylManifold m = testutil::curved3();
  ConformalMapping id = weyl::identity_mapping(m);
  WeylManifold t = weyl::apply_mapping(m, id);
  for (const Point& p : testutil::grid_points3()) {
    REQUIRE((weyl::ssnm_connection(t, p) - weyl::ssnm_connection(m, p))
                .max_abs() == 0.0);
    weyl::MappingFrame mf = weyl::mapping_frame(m, id, p);
    REQUIRE(mf.W.max_abs() == 0.0);
    REQUIRE(mf.phi == 0.0);
  }
}

TEST_CASE("Q = P collapses the deformation tensor to |P|^2 g") {
  WeylManifold m = testutil::curved3();
  ConformalMapping map = parse_mapping(
      m, {"0.2 - 0.1*y", "0.15*x", "0.1 + 0.05*z"},
      {"0.2 - 0.1*y", "0.15*x", "0.1 + 0.05*z"});
  for (const Point& p : testutil::grid_points3()) {
    weyl::Frame f = m.frame(p);
    weyl::MappingFrame mf = weyl::mapping_frame(map, f);
    double p2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        p2 += f.g_inv(i, j) * mf.P_vals(i) * mf.P_vals(j);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        REQUIRE(std::fabs(mf.W(i, j) - p2 * f.g(i, j)) <= 1e-12);
    REQUIRE(mf.phi == doctest::Approx(p2).epsilon(1e-12));
  }
  weyl::ConcircularCheck cc =
      weyl::is_concircular(m, map, testutil::grid_points3(), 1e-9);
  CHECK(cc.concircular);
}

TEST_CASE("constant P with Q = 0 is not concircular") {
  WeylManifold m = testutil::flat2();
  ConformalMapping map = parse_mapping(m, {"0.3", "0"}, {"0", "0"});
  weyl::MappingFrame mf = weyl::mapping_frame(m, map, {{0.2, -0.1}});
  CHECK(mf.W(0, 0) == doctest::Approx(-0.045).epsilon(1e-13));
  CHECK(mf.W(1, 1) == doctest::Approx(0.045).epsilon(1e-13));
  CHECK(std::fabs(mf.W(0, 1)) <= 1e-14);
  weyl::ConcircularCheck cc =
      weyl::is_concircular(m, map, testutil::grid_points2(), 1e-9);
  CHECK_FALSE(cc.concircular);
  CHECK(cc.max_residual > 1e-3);
  CHECK_THROWS_AS(weyl::concircular_invariance_residual(
                      m, map, testutil::grid_points2(), 1e-9),
                  weyl::NotConcircularError);
}

TEST_CASE("underlined deformation tensors are consistent by construction") {
  WeylManifold m = testutil::curved3();
  ConformalMapping map = parse_mapping(
      m, {"0.2*x", "0.1 - 0.05*z", "0.3*y"}, {"0.1*y", "0.2", "0.05*x"});
  for (const Point& p : testutil::grid_points3()) {
    weyl::Frame f = m.frame(p);
    weyl::MappingFrame mf = weyl::mapping_frame(map, f);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        REQUIRE(std::fabs(mf.P_under(i, j) -
                          (mf.P_ij(i, j) - mf.P_vals(i) * f.S(j))) <= 1e-13);
        REQUIRE(std::fabs(mf.Q_under(i, j) -
                          (mf.Q_ij(i, j) - mf.Q_vals(i) * f.S(j))) <= 1e-13);
        // W = Pu - Qu + 2 P_(i Q_j)
        const double w = mf.P_under(i, j) - mf.Q_under(i, j) +
                         mf.P_vals(i) * mf.Q_vals(j) +
                         mf.P_vals(j) * mf.Q_vals(i);
        REQUIRE(std::fabs(mf.W(i, j) - w) <= 1e-13);
      }
  }
}

TEST_CASE("transformation laws for a generic polynomial mapping") {
  WeylManifold m = testutil::curved3();
  ConformalMapping map = parse_mapping(
      m, {"0.2 - 0.1*y", "0.15*x + 0.05*z", "0.1 + 0.05*y"},
      {"0.1*z - 0.2", "0.05 + 0.1*x", "0.15*y"});
  weyl::MappingLawResiduals r =
      weyl::mapping_law_residuals(m, map, testutil::grid_points3());
  CHECK(r.gamma_sym <= 1e-10);
  CHECK(r.riemann_sym <= 1e-10);
  CHECK(r.gamma_bar <= 1e-10);
  CHECK(r.riemann_bar <= 1e-10);
  CHECK(r.under_p <= 1e-12);
  CHECK(r.under_q <= 1e-12);
}

TEST_CASE("concircular invariance for Q = P mappings") {
  // Admissible family: P a multiple of a closed S.
  WeylManifold m = make_manifold(
      {"x", "y", "z"},
      {{"1", "0", "0"}, {"0", "1 + x^2", "0"}, {"0", "0", "1 + y^2"}},
      {"0.1*y", "0.1*x", "0"}, {"0.1*y", "0.1*x", "0.2*z"});
  ConformalMapping map = parse_mapping(m, {"0.04*y", "0.04*x", "0.08*z"},
                                       {"0.04*y", "0.04*x", "0.08*z"});
  weyl::ConcircularResiduals cr = weyl::concircular_invariance_residual(
      m, map, testutil::grid_points3(), 1e-9);
  CHECK(cr.riemann_shift <= 1e-10);
  CHECK(cr.ricci_shift <= 1e-10);
  CHECK(cr.scalar_shift <= 1e-10);
  CHECK(cr.z_invariance <= 1e-10);

  // Identity mapping: all shifts are exactly zero.
  weyl::ConcircularResiduals zero = weyl::concircular_invariance_residual(
      m, weyl::identity_mapping(m), testutil::grid_points3(), 1e-9);
  CHECK(zero.riemann_shift == 0.0);
  CHECK(zero.z_invariance == 0.0);
}

TEST_CASE("scalar shift law for a concircular mapping") {
  WeylManifold m = testutil::flat2("0", "0", "y", "0");
  // Componentwise-admissible family for S = (y, 0).
  ConformalMapping map =
      parse_mapping(m, {"0.2 + 0.3*x^2", "0"}, {"0.2 + 0.3*x^2", "0"});
  WeylManifold t = weyl::apply_mapping(m, map);
  for (const Point& p : testutil::grid_points2()) {
    weyl::Frame f = m.frame(p);
    weyl::Frame ft = t.frame(p);
    weyl::MappingFrame mf = weyl::mapping_frame(map, f);
    weyl::CurvatureSet bar = weyl::curvature_set(f, weyl::Conn::SemiSymmetric);
    weyl::CurvatureSet bart =
        weyl::curvature_set(ft, weyl::Conn::SemiSymmetric);
    const int n = 2;
    REQUIRE(std::fabs(bart.scalar - bar.scalar -
                      2.0 * n * (n - 1.0) * (mf.phi - mf.pq)) <= 1e-11);
  }
}

TEST_CASE("composition with the inverse mapping restores the connection") {
  WeylManifold m = testutil::curved3();
  ConformalMapping map = parse_mapping(
      m, {"0.2 - 0.1*y", "0.15*x", "0.05*z"}, {"0.1*z", "0.2*y", "0.05"});
  ConformalMapping inv;
  for (const ScalarField& f : map.P) inv.P.push_back(-f);
  for (const ScalarField& f : map.Q) inv.Q.push_back(-f);
  WeylManifold round = weyl::apply_mapping(weyl::apply_mapping(m, map), inv);
  for (const Point& p : testutil::grid_points3())
    REQUIRE((weyl::ssnm_connection(round, p) - weyl::ssnm_connection(m, p))
                .max_abs() <= 1e-12);
}
