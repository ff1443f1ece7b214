#include <cmath>
#include <random>

#include "cma/oracles.hpp"
#include "cma/stencil.hpp"
#include "doctest.h"

using namespace cma;
using namespace cma::grid;
using namespace cma::oracle;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("leibniz determinant agrees with Eigen on random Hermitian matrices") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int n : {1, 2, 3}) {
    for (int t = 0; t < 20; ++t) {
      Eigen::MatrixXcd X(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) X(i, j) = cd(U(rng), U(rng));
      Eigen::MatrixXcd Hm = X + X.adjoint();
      std::vector<cd> H(n * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H[i * n + j] = Hm(i, j);
      CHECK(std::abs(leibniz_det(H.data(), n) - Hm.determinant()) < 1e-12);
    }
  }
}

TEST_CASE("im_abs: n=1 half-plane slab is flat to roundoff") {
  // u = |Im z| = y is linear on {y > 0.5}: the stencil is exact up to the
  // rounding of the sampled coordinates (amplified by 1/h^2)
  Grid b = box_grid(1, {0.0, 0.6}, {1.0, 1.6}, {16, 16});
  DefectReport rep = im_abs_check(b, 3);
  CHECK(rep.sup_defect < 1e-12);
}

TEST_CASE("im_abs: n=2 thin-band box meets the HCMA defect bound") {
  // The determinant cancellation is sharpest near the y1 = 0 plane; a thin
  // band in y1 with y2 well away from zero keeps |Im z| >= 3h while putting
  // the sup defect at the 1e-8 scale at N = 32.
  const int N = 32;
  Grid b = box_grid(2, {0.0, -0.01, 0.0, 0.75}, {0.6, 0.01, 0.6, 1.25}, {N, N, N, N});
  DefectReport rep = im_abs_check(b, 3);
  CHECK(rep.sup_defect <= 1e-8);
  CHECK(rep.points > 0);
}

TEST_CASE("im_abs: refinement shrinks the defect by at least 3x per halving") {
  auto defect_at = [](int N) {
    Grid b = box_grid(2, {0.0, 0.1, 0.0, 0.75}, {0.6, 0.4, 0.6, 1.25}, {N, N, N, N});
    return im_abs_check(b, 3).sup_defect;
  };
  const double d16 = defect_at(16), d32 = defect_at(32);
  CHECK(d16 / d32 >= 3.0);
}

TEST_CASE("im_abs: precondition rejects boxes touching R^n") {
  Grid b = box_grid(1, {0.0, -0.5}, {1.0, 0.5}, {16, 16});
  CHECK_THROWS_AS((void)im_abs_check(b, 3), const error&);
  Grid ok = box_grid(1, {0.0, 0.5}, {1.0, 1.5}, {16, 16});
  CHECK_THROWS_AS((void)im_abs_check(ok, 2), const error&);
}

TEST_CASE("quadric pullback: closed form, zero set, harmonicity") {
  QuadricReport rep = quadric_pullback_check(0.2, 1.0, 33);
  CHECK(rep.pullback_defect <= 1e-12);
  CHECK(rep.harmonicity_defect <= 1e-10);
  CHECK(rep.sample_value_at_i == doctest::Approx(2.0).epsilon(1e-13));
  // zeta real: |z|^2 = 1 and u = 0 (the sphere is the zero set)
  const cd zeta(0.7, 0.0);
  const double z2 = std::norm(std::cos(zeta)) + std::norm(std::sin(zeta));
  CHECK(z2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::acosh(std::max(1.0, z2)) <= 1e-7);
}

TEST_CASE("radial profiles: identity probe and grid determinants") {
  for (const RadialProfile& prof : {radial_linear(), radial_quadratic(), radial_log()}) {
    for (int n : {1, 2}) CHECK(radial_identity_probe(prof, n, 5, 11) < 1e-12);
  }

  // f(s) = s reproduces det = 1 exactly (quadratic potential)
  Grid b1 = box_grid_uniform(2, -0.5, 0.5, 9);
  CHECK(radial_residual_check(radial_linear(), b1).sup_defect < 1e-12);

  // order >= 1.9 for the curved profiles on the unit polydisc section
  for (const RadialProfile& prof : {radial_quadratic(), radial_log()}) {
    double errs[2];
    int idx = 0;
    for (int N : {17, 33}) {
      Grid b = box_grid_uniform(2, -0.45, 0.45, N);
      errs[idx++] = radial_residual_check(prof, b).sup_defect;
    }
    CHECK(std::log2(errs[0] / errs[1]) > 1.9);
  }
}

TEST_CASE("manufactured case: residual identically zero and boundary restriction") {
  Grid t = torus_grid_uniform(2, 2 * kPi, 12);
  Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(2, 2);
  ma::MAProblem templ = ma::torus_problem(t, Form11Field::constant(t, I2),
                                          Form11Field::constant(t, I2),
                                          ma::RHSSpec::constant(1.0));
  ScalarField ustar = ScalarField::sample(
      t, [](const double* x) { return 0.1 * std::sin(x[0]) * std::cos(x[3]); });
  ManufacturedCase mc = make_manufactured(ustar, templ);
  ma::MAProblem prob = templ;
  prob.rhs = ma::RHSSpec::from_field(mc.psi_star);
  CHECK(ma::ma_residual(ustar, prob).sup_abs() < 1e-13);

  // u_star = 0 gives psi_star = det chi / det g = 1
  ManufacturedCase zero = make_manufactured(ScalarField(t), templ);
  grid::Walker w(t);
  for (std::size_t p = 0; p < t.count(); ++p, w.advance())
    CHECK(zero.psi_star[p] == doctest::Approx(1.0).epsilon(1e-14));

  // box case carries the boundary restriction exactly
  Grid b = box_grid_uniform(1, 0.0, 1.0, 9);
  ScalarField q = ScalarField::sample(b, [](const double* x) {
    return x[0] * x[0] + x[1] * x[1];
  });
  ma::MAProblem btempl = ma::box_problem(b, Form11Field::constant(b, Eigen::MatrixXcd::Identity(1, 1)),
                                         Form11Field::constant(b, Eigen::MatrixXcd::Identity(1, 1)),
                                         ma::RHSSpec::constant(1.0), q);
  ManufacturedCase bc = make_manufactured(q, btempl);
  REQUIRE(bc.boundary.has_value());
  CHECK(ma::boundary_mismatch(*bc.boundary, q) == 0.0);

  // inadmissible u_star is rejected
  ScalarField badu = ScalarField::sample(b, [](const double* x) {
    return -3.0 * (x[0] * x[0] + x[1] * x[1]);
  });
  CHECK_THROWS_AS((void)make_manufactured(badu, btempl), const error&);
}
