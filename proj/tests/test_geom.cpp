#include <cmath>

#include "cma/metrics.hpp"
#include "cma/tensors.hpp"
#include "doctest.h"

using namespace cma;
using namespace cma::geom;

namespace {

// Independent brute-force contraction used against the library's paths.
cd contract_upper(const Eigen::MatrixXcd& g, const Eigen::MatrixXcd& x) {
  Eigen::MatrixXcd ginv = g.inverse();
  cd s(0.0);
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) s += ginv(j, i) * x(i, j);
  return s;
}

}  // namespace

TEST_CASE("christoffel vanishes for flat and critical conformal metrics") {
  ChartJet flat = ChartJet::flat(2);
  CHECK(christoffel(flat).max_abs() == 0.0);

  ExpDiagonalMetric ed(2);
  ChartJet origin = ed.jet({cd(0, 0), cd(0, 0)});
  CHECK(christoffel(origin).max_abs() == 0.0);
}

TEST_CASE("christoffel satisfies its defining relation on random metrics") {
  auto m = nonkaehler_quadratic_metric(2, 7);
  for (const auto& z : sample_points(2, 10, 99)) {
    ChartJet jet = m->jet(z);
    Tensor3 G = christoffel(jet);
    // g_{l m~} Gamma^l_{jk} - g_{k m~, j} = 0
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int mm = 0; mm < 2; ++mm) {
          cd s(0.0);
          for (int l = 0; l < 2; ++l) s += jet.g(l, mm) * G(l, j, k);
          CHECK(std::abs(s - jet.dg[j](k, mm)) < 1e-13);
        }
  }
}

TEST_CASE("torsion antisymmetry and Kahler detection") {
  ChartJet flat = ChartJet::flat(2);
  CHECK(torsion(flat).max_abs() == 0.0);

  for (const auto& m : standard_corpus()) {
    for (const auto& z : sample_points(2, 4, 5)) {
      ChartJet jet = m->jet(z);
      Tensor3 T = torsion(jet);
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            CHECK(std::abs(T(k, i, j) + T(k, j, i)) == 0.0);  // exact by construction
      const bool kahler = is_kaehler_at(*m, z);
      if (kahler) CHECK(T.max_abs() < 1e-12);
      if (T.max_abs() < 1e-14) CHECK(kahler);
    }
  }
}

TEST_CASE("torsion matches the hand expansion on the z-bar perturbed metrics") {
  // For g_{1 2~} = conj(z_2) the hand expansion of T^k_{ij} collapses: the
  // only holomorphic partial is d g_{2 1~}/dz_2 = 1 and every difference
  // g_{j l~, i} - g_{i l~, j} cancels (the metric comes from the potential
  // |z|^2 + Re(z_1 conj(z_2)^2)). The conj(z_1) variant breaks the symmetry
  // with T^1_{12} = g_{2 1~, 1} - g_{1 1~, 2} = 1 at the origin.
  std::vector<cd> z{cd(0, 0), cd(0, 0)};
  for (auto m : {nonkaehler_canonical_metric(), nonkaehler_torsionful_metric()}) {
    ChartJet jet = m->jet(z);
    Tensor3 T = torsion(jet);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          cd expect(0.0);
          for (int l = 0; l < 2; ++l)
            expect += jet.g.inverse()(l, k) * (jet.dg[i](j, l) - jet.dg[j](i, l));
          CHECK(std::abs(T(k, i, j) - expect) < 1e-15);
        }
  }
  Tensor3 T0 = torsion(nonkaehler_canonical_metric()->jet(z));
  CHECK(T0.max_abs() == 0.0);
  Tensor3 T1 = torsion(nonkaehler_torsionful_metric()->jet(z));
  CHECK(std::abs(T1(0, 0, 1) - cd(1.0)) < 1e-15);  // T^1_{12} = g_{2 1~, 1} - g_{1 1~, 2} = 1
  CHECK(T1.max_abs() > 0.5);
}

TEST_CASE("curvature: explicit value for (1+|z|^2) on C^1 at 0") {
  // g_{1 1~} = 1 + |z|^2: at 0 the quadratic term of the curvature formula
  // vanishes and R_{1 1~ 1 1~} = -g_{1 1~, 1 1~} = -1.
  const int n = 1;
  std::vector<std::vector<Poly>> e(1, std::vector<Poly>(1, Poly(n)));
  e[0][0] = Poly::constant(n, 1.0) + Poly::var(n, 0) * Poly::var_conj(n, 0);
  PolyMetric m("fubini-like", n, e);
  ChartJet jet = m.jet({cd(0, 0)});
  Tensor4 R = curvature(jet);
  CHECK(std::abs(R(0, 0, 0, 0) - cd(-1.0)) < 1e-15);
}

TEST_CASE("curvature Hermitian symmetry on the corpus") {
  for (const auto& m : standard_corpus())
    for (const auto& z : sample_points(2, 3, 17)) {
      ChartJet jet = m->jet(z);
      Tensor4 R = curvature(jet);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
              CHECK(std::abs(R(i, j, k, l) - std::conj(R(j, i, l, k))) < 1e-12);
    }
}

TEST_CASE("curvature matches finite differences of christoffel") {
  // First form of the curvature: R_{i j~ k l~} = -g_{m l~} d Gamma^m_{ik}/dz~_j.
  auto m = nonkaehler_quadratic_metric(2, 3);
  std::vector<cd> z{cd(0.1, -0.2), cd(0.05, 0.15)};
  ChartJet jet = m->jet(z);
  Tensor4 R = curvature(jet);

  auto gamma_at = [&](const std::vector<cd>& p) { return christoffel(m->jet(p)); };
  double prev_err = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const double h = pass == 0 ? 1e-3 : 5e-4;
    double err = 0.0;
    for (int j = 0; j < 2; ++j) {
      // d/dz~_j via central differences: d/dz~ = (d/dx + i d/dy)/2
      auto shift = [&](double dx, double dy) {
        std::vector<cd> p = z;
        p[j] += cd(dx, dy);
        return gamma_at(p);
      };
      Tensor3 gx1 = shift(h, 0), gx0 = shift(-h, 0), gy1 = shift(0, h), gy0 = shift(0, -h);
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            cd dbar(0.0);
            for (int mm = 0; mm < 2; ++mm) {
              cd dX = (gx1(mm, i, k) - gx0(mm, i, k)) / (2 * h);
              cd dY = (gy1(mm, i, k) - gy0(mm, i, k)) / (2 * h);
              dbar += jet.g(mm, l) * 0.5 * (dX + cd(0, 1) * dY);
            }
            err = std::max(err, std::abs(R(i, j, k, l) + dbar));
          }
    }
    if (pass == 0)
      prev_err = err;
    else
      CHECK(err < prev_err / 3.0);  // second-order decay
    CHECK(err < 1e-5);
  }
}

TEST_CASE("ricci traces: brute-force contraction and Kahler coincidence") {
  for (const auto& m : standard_corpus())
    for (const auto& z : sample_points(2, 2, 23)) {
      ChartJet jet = m->jet(z);
      Tensor4 R = curvature(jet);
      RicciTraces tr = ricci_traces(jet);
      Eigen::MatrixXcd ginv = jet.g.inverse();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          cd r1(0.0), r2(0.0);
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              r1 += ginv(j, i) * R(i, j, a, b);
              r2 += ginv(j, i) * R(a, b, i, j);
            }
          CHECK(std::abs(tr.first(a, b) - r1) < 1e-13);
          CHECK(std::abs(tr.second(a, b) - r2) < 1e-13);
          CHECK(std::abs(tr.first(a, b) - std::conj(tr.first(b, a))) < 1e-12);
          CHECK(std::abs(tr.second(a, b) - std::conj(tr.second(b, a))) < 1e-12);
        }
      if (is_kaehler_at(*m, z))
        CHECK((tr.first - tr.second).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("second Ricci trace equals -dd~ log det g (finite differences)") {
  auto m = kaehler_potential_metric(2, 21);
  std::vector<cd> z{cd(0.12, 0.08), cd(-0.1, 0.2)};
  RicciTraces tr = ricci_traces(m->jet(z));

  auto logdet = [&](const std::vector<cd>& p) {
    return std::log(m->jet(p).g.determinant().real());
  };
  double errs[2];
  for (int pass = 0; pass < 2; ++pass) {
    const double h = pass == 0 ? 2e-3 : 1e-3;
    double err = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        auto at = [&](double a, double b, double c, double d) {
          std::vector<cd> p = z;
          p[i] += cd(a, b);
          p[j] += cd(c, d);
          return logdet(p);
        };
        cd mixed;
        if (i == j) {
          std::vector<cd> zxp = z, zxm = z, zyp = z, zym = z;
          zxp[i] += cd(h, 0);
          zxm[i] -= cd(h, 0);
          zyp[i] += cd(0, h);
          zym[i] -= cd(0, h);
          double dxx = (logdet(zxp) - 2 * logdet(z) + logdet(zxm)) / (h * h);
          double dyy = (logdet(zyp) - 2 * logdet(z) + logdet(zym)) / (h * h);
          mixed = 0.25 * cd(dxx + dyy, 0);
        } else {
          double fxx = (at(h, 0, h, 0) - at(h, 0, -h, 0) - at(-h, 0, h, 0) + at(-h, 0, -h, 0)) /
                       (4 * h * h);
          double fyy = (at(0, h, 0, h) - at(0, h, 0, -h) - at(0, -h, 0, h) + at(0, -h, 0, -h)) /
                       (4 * h * h);
          double fxy = (at(h, 0, 0, h) - at(h, 0, 0, -h) - at(-h, 0, 0, h) + at(-h, 0, 0, -h)) /
                       (4 * h * h);
          double fyx = (at(0, h, h, 0) - at(0, h, -h, 0) - at(0, -h, h, 0) + at(0, -h, -h, 0)) /
                       (4 * h * h);
          mixed = 0.25 * (cd(fxx + fyy, 0) + cd(0, 1) * (fxy - fyx));
        }
        err = std::max(err, std::abs(tr.second(i, j) + mixed));
      }
    errs[pass] = err;
  }
  CHECK(errs[1] < errs[0] / 3.5);  // order >= 1.9 under halving
  CHECK(errs[1] < 1e-4);
}

TEST_CASE("bianchi defect vanishes on the corpus") {
  ChartJet flat = ChartJet::flat(2);
  CHECK(bianchi_defect(flat).max_abs() == 0.0);
  for (const auto& m : standard_corpus())
    for (const auto& z : sample_points(2, 4, 31))
      CHECK(bianchi_defect(m->jet(z)).max_abs() < 1e-10);
}

TEST_CASE("kahler jets: torsion term and antisymmetrized curvature vanish separately") {
  auto m = kaehler_potential_metric(2, 22);
  for (const auto& z : sample_points(2, 3, 37)) {
    ChartJet jet = m->jet(z);
    CHECK(torsion(jet).max_abs() < 1e-12);
    Tensor4 R = curvature(jet);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            CHECK(std::abs(R(i, j, k, l) - R(k, j, i, l)) < 1e-12);
  }
}

TEST_CASE("degenerate metric is rejected at inversion") {
  ChartJet jet = ChartJet::flat(2);
  jet.g(1, 1) = 1e-13;
  CHECK_THROWS_AS((void)christoffel(jet), const error&);
}

TEST_CASE("chart jet validation catches broken symmetry") {
  ChartJet jet = ChartJet::flat(2);
  jet.g(0, 1) = cd(0.1, 0.0);  // not mirrored to (1,0)
  CHECK_THROWS_AS(validate(jet), const error&);
  jet = ChartJet::flat(2);
  jet.ddm(0, 1, 0, 1) = cd(0.3, 0.0);  // pairing partner left at zero
  CHECK_THROWS_AS(validate(jet), const error&);
}

TEST_CASE("sanity: contraction helper agrees with Laplacian convention") {
  Eigen::MatrixXcd g(2, 2);
  g << cd(1, 0), cd(0.2, 0.1), cd(0.2, -0.1), cd(2, 0);
  CHECK(std::abs(contract_upper(g, g) - cd(2.0)) < 1e-14);
}
