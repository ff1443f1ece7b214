#include <cmath>
#include <fstream>
#include <iterator>

#include "cma/field_io.hpp"
#include "cma/stencil.hpp"
#include "doctest.h"

using namespace cma;
using namespace cma::grid;

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXcd id2() { return Eigen::MatrixXcd::Identity(2, 2); }
}  // namespace

TEST_CASE("grid bookkeeping: strides, interior counts, neighbor wrap") {
  Grid t = torus_grid_uniform(1, 2 * kPi, 8);
  CHECK(t.count() == 64);
  CHECK(t.interior_count() == 64);
  Grid b = box_grid_uniform(1, 0.0, 1.0, 6);
  CHECK(b.count() == 36);
  CHECK(b.interior_count() == 16);
  CHECK(b.axis(0).h() == doctest::Approx(0.2));

  int mi[2] = {0, 7};
  std::size_t p = t.encode(mi);
  CHECK(t.neighbor(p, mi, 1, 1) == t.encode(std::array<int, 2>{0, 0}.data()));
  CHECK(t.neighbor(p, mi, 0, -1) == t.encode(std::array<int, 2>{7, 7}.data()));
}

TEST_CASE("resolution floor and bad inputs are rejected") {
  CHECK_THROWS_AS(torus_grid_uniform(1, 1.0, 4), const error&);
  CHECK_THROWS_AS(box_grid(1, {0.0, 0.0}, {0.0, 1.0}, {8, 8}), const error&);
}

TEST_CASE("hessian of constants and quadratics") {
  Grid b = box_grid_uniform(2, -1.0, 1.0, 9);
  ScalarField c = ScalarField::sample(b, [](const double*) { return 3.5; });
  Form11Field hc = complex_hessian(c);
  Walker w(b);
  for (std::size_t p = 0; p < b.count(); ++p, w.advance())
    if (b.is_interior(w.mi()))
      CHECK(hc.at(p).cwiseAbs().maxCoeff() == 0.0);

  // |z|^2 -> identity, exactly (central differences reproduce quadratics)
  ScalarField q = ScalarField::sample(b, [](const double* x) {
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
  });
  Form11Field hq = complex_hessian(q);
  w.seek(0);
  for (std::size_t p = 0; p < b.count(); ++p, w.advance())
    if (b.is_interior(w.mi()))
      CHECK((hq.at(p) - id2()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("hessian is Hermitian per point, bit-exactly") {
  Grid t = torus_grid_uniform(2, 2 * kPi, 8);
  ScalarField u = ScalarField::sample(t, [](const double* x) {
    return std::sin(x[0]) * std::cos(x[3]) + 0.3 * std::cos(x[1] + x[2]);
  });
  Form11Field H = complex_hessian(u);
  for (std::size_t p = 0; p < t.count(); ++p) {
    Eigen::MatrixXcd m = H.at(p);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        CHECK(m(a, b).real() == m(b, a).real());
        CHECK(m(a, b).imag() == -m(b, a).imag());
      }
  }
}

TEST_CASE("hessian converges at second order on an analytic function") {
  // n=1: u = sin(x) cos(y): u_{1 1~} = -(1/2) sin x cos y
  double err[3];
  int idx = 0;
  for (int N : {16, 32, 64}) {
    Grid t = torus_grid_uniform(1, 2 * kPi, N);
    ScalarField u = ScalarField::sample(
        t, [](const double* x) { return std::sin(x[0]) * std::cos(x[1]); });
    Form11Field H = complex_hessian(u);
    double worst = 0.0;
    Walker w(t);
    for (std::size_t p = 0; p < t.count(); ++p, w.advance()) {
      double x[2];
      t.coords(w.mi(), x);
      const double expect = -0.5 * std::sin(x[0]) * std::cos(x[1]);
      worst = std::max(worst, std::abs(H.at(p)(0, 0).real() - expect));
    }
    err[idx++] = worst;
  }
  CHECK(std::log2(err[0] / err[1]) > 1.9);
  CHECK(std::log2(err[1] / err[2]) > 1.9);
}

TEST_CASE("gradient_sup: constants, linear slope, periodicity rejection") {
  Grid b = box_grid_uniform(1, 0.0, 1.0, 9);
  Form11Field g = Form11Field::constant(b, Eigen::MatrixXcd::Identity(1, 1));
  ScalarField c = ScalarField::sample(b, [](const double*) { return 1.0; });
  CHECK(gradient_sup(c, g) == 0.0);

  ScalarField lin = ScalarField::sample(b, [](const double* x) { return x[0]; });
  CHECK(gradient_sup(lin, g) == doctest::Approx(0.5).epsilon(1e-12));

  Grid t = torus_grid_uniform(1, 2 * kPi, 8);
  CHECK_THROWS_AS(ScalarField::sample(t, [](const double* x) { return x[0]; }), const error&);
}

TEST_CASE("chern laplacian: quadratic and eigenfunction checks") {
  Grid b = box_grid_uniform(2, -1.0, 1.0, 9);
  Form11Field g = Form11Field::constant(b, id2());
  ScalarField q = ScalarField::sample(b, [](const double* x) {
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
  });
  ScalarField lap = chern_laplacian(q, g);
  Walker w(b);
  for (std::size_t p = 0; p < b.count(); ++p, w.advance())
    if (b.is_interior(w.mi())) CHECK(lap[p] == doctest::Approx(2.0).epsilon(1e-12));

  const double L = 2 * kPi;
  double err[2];
  int idx = 0;
  for (int N : {16, 32}) {
    Grid t = torus_grid_uniform(1, L, N);
    Form11Field gt = Form11Field::constant(t, Eigen::MatrixXcd::Identity(1, 1));
    ScalarField u =
        ScalarField::sample(t, [&](const double* x) { return std::cos(2 * kPi * x[0] / L); });
    ScalarField lu = chern_laplacian(u, gt);
    const double lambda = -0.25 * (2 * kPi / L) * (2 * kPi / L);
    double worst = 0.0;
    for (std::size_t p = 0; p < t.count(); ++p) worst = std::max(worst, std::abs(lu[p] - lambda * u[p]));
    err[idx++] = worst;
  }
  CHECK(std::log2(err[0] / err[1]) > 1.9);
}

TEST_CASE("integrate: exact constants, periodic cancellation, box rejected") {
  Grid t = torus_grid_uniform(2, 2 * kPi, 8);
  Form11Field g = Form11Field::constant(t, id2());
  ScalarField one = ScalarField::sample(t, [](const double*) { return 1.0; });
  const double vol = std::pow(2 * kPi, 4);
  CHECK(integrate(one, g) == doctest::Approx(vol).epsilon(1e-13));

  ScalarField cosx = ScalarField::sample(t, [](const double* x) { return std::cos(x[0]); });
  CHECK(std::abs(integrate(cosx, g)) < 1e-10 * vol);

  Grid b = box_grid_uniform(2, 0.0, 1.0, 8);
  Form11Field gb = Form11Field::constant(b, id2());
  ScalarField fb = ScalarField::sample(b, [](const double*) { return 1.0; });
  CHECK_THROWS_AS((void)integrate(fb, gb), const error&);
}

TEST_CASE("product grid hessian reduces to the base hessian for t-independent fields") {
  Grid base = torus_grid_uniform(1, 2 * kPi, 8);
  Grid prod = product_grid(base, 6);
  CHECK(prod.ncomplex() == 2);
  CHECK(prod.y_axis(1) == -1);
  ScalarField u = ScalarField::sample(
      prod, [](const double* x) { return std::sin(x[0]) * std::cos(x[1]); });
  ScalarField ub = ScalarField::sample(
      base, [](const double* x) { return std::sin(x[0]) * std::cos(x[1]); });
  Form11Field Hp = complex_hessian(u);
  Form11Field Hb = complex_hessian(ub);
  Walker w(prod);
  int bmi[2];
  for (std::size_t p = 0; p < prod.count(); ++p, w.advance()) {
    if (!prod.is_interior(w.mi())) continue;
    bmi[0] = w.mi()[0];
    bmi[1] = w.mi()[1];
    const std::size_t pb = base.encode(bmi);
    CHECK(std::abs(Hp.at(p)(0, 0) - Hb.at(pb)(0, 0)) < 1e-14);
    CHECK(std::abs(Hp.at(p)(1, 1)) < 1e-14);  // quarter of d2/dt2 of a t-constant
    CHECK(std::abs(Hp.at(p)(0, 1)) < 1e-14);
  }
}

TEST_CASE("one-sided derivatives are second order at box faces") {
  Grid b = box_grid_uniform(1, 0.0, 1.0, 33);
  ScalarField u = ScalarField::sample(
      b, [](const double* x) { return std::sin(2.0 * x[0]) + std::cos(1.5 * x[1]); });
  int mi[2] = {0, 16};
  std::size_t p = b.encode(mi);
  const double x0 = 0.0, y0 = b.coord(1, 16);
  CHECK(d1_general(u, p, mi, 0) ==
        doctest::Approx(2.0 * std::cos(2.0 * x0)).epsilon(5e-3));
  CHECK(d2_general(u, p, mi, 0) ==
        doctest::Approx(-4.0 * std::sin(2.0 * x0)).epsilon(5e-2));
  (void)y0;
}

TEST_CASE("CMAF dump/load round trip and deterministic bytes") {
  Grid t = torus_grid_uniform(1, 2 * kPi, 8);
  ScalarField u = ScalarField::sample(
      t, [](const double* x) { return std::sin(x[0]) + 0.25 * std::cos(x[1]); });
  dump_field(u, "roundtrip_a.cmaf");
  dump_field(u, "roundtrip_b.cmaf");
  ScalarField v = load_field("roundtrip_a.cmaf");
  CHECK(v.grid().same_layout(t));
  for (std::size_t p = 0; p < t.count(); ++p) CHECK(v[p] == u[p]);

  std::ifstream fa("roundtrip_a.cmaf", std::ios::binary), fb("roundtrip_b.cmaf", std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  export_csv(u, "roundtrip.csv");
  std::ifstream csv("roundtrip.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x0,x1,value");
}
