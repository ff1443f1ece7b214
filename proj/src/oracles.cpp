#include "cma/oracles.hpp"

#include <cmath>
#include <random>

#include "cma/stencil.hpp"

namespace cma::oracle {

using grid::Grid;
using grid::ScalarField;

cd leibniz_det(const cd* M, int nc) {
  std::vector<int> perm(nc);
  for (int i = 0; i < nc; ++i) perm[i] = i;
  cd acc(0.0);
  // iterate permutations with parity tracking
  std::vector<int> c(nc, 0);
  int sign = 1;
  auto term = [&]() {
    cd t(sign, 0.0);
    for (int i = 0; i < nc; ++i) t *= M[i * nc + perm[i]];
    return t;
  };
  acc += term();
  int i = 0;
  while (i < nc) {
    if (c[i] < i) {
      std::swap(perm[i % 2 == 0 ? 0 : c[i]], perm[i]);
      sign = -sign;
      acc += term();
      ++c[i];
      i = 0;
    } else {
      c[i] = 0;
      ++i;
    }
  }
  return acc;
}

nlohmann::json DefectReport::to_json() const {
  return {{"sup_defect", sup_defect}, {"max_h", max_h}, {"points", points}};
}

nlohmann::json QuadricReport::to_json() const {
  return {{"pullback_defect", pullback_defect},
          {"harmonicity_defect", harmonicity_defect},
          {"sample_value_at_i", sample_value_at_i}};
}

DefectReport im_abs_check(const Grid& box, int safety) {
  if (box.kind() != grid::GridKind::box) fail(errc::invalid_input, "im_abs: needs a box grid");
  if (safety < 3) fail(errc::precondition, "im_abs: safety must be at least 3");
  const int n = box.ncomplex();
  const double hmax = box.max_h();

  auto imabs = [&](const double* x) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += x[2 * a + 1] * x[2 * a + 1];
    return std::sqrt(s);
  };
  // precondition: the whole box stays safety*h away from R^n; the nearest
  // approach is at a corner of the y-range
  {
    double closest2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const grid::Axis& ax = box.axis(2 * a + 1);
      const double lo = ax.lo, hi = ax.lo + ax.len;
      double m = 0.0;
      if (lo > 0.0) m = lo;
      else if (hi < 0.0) m = -hi;
      else m = 0.0;
      closest2 += m * m;
    }
    if (std::sqrt(closest2) < safety * hmax)
      fail(errc::precondition, "im_abs: box touches the safety margin around R^n");
  }

  ScalarField u = ScalarField::sample(box, imabs);
  DefectReport rep;
  rep.max_h = hmax;
  const int nc = n;
  grid::Walker w(box);
  std::vector<cd> H(nc * nc);
  for (std::size_t p = 0; p < box.count(); ++p, w.advance()) {
    if (!box.is_interior(w.mi())) continue;
    grid::hessian_at(u, p, w.mi(), H.data());
    rep.sup_defect = std::max(rep.sup_defect, std::abs(leibniz_det(H.data(), nc)));
    ++rep.points;
  }
  return rep;
}

QuadricReport quadric_pullback_check(double eta_lo, double eta_hi, int res) {
  if (eta_lo <= 0.0) fail(errc::invalid_input, "quadric: grid must stay inside Im zeta > 0");
  Grid box = grid::box_grid(1, {0.0, eta_lo}, {2.0 * M_PI, eta_hi}, {res, res});
  auto pullback = [](const double* x) {
    const cd zeta(x[0], x[1]);
    const double z2 = std::norm(std::cos(zeta)) + std::norm(std::sin(zeta));
    return std::acosh(z2);
  };
  ScalarField u = ScalarField::sample(box, pullback);
  QuadricReport rep;
  grid::Walker w(box);
  for (std::size_t p = 0; p < box.count(); ++p, w.advance()) {
    double x[2];
    box.coords(w.mi(), x);
    rep.pullback_defect = std::max(rep.pullback_defect, std::abs(u[p] - 2.0 * x[1]));
    if (box.is_interior(w.mi())) {
      const double lap =
          grid::d2_axis(u, p, w.mi(), 0) + grid::d2_axis(u, p, w.mi(), 1);
      rep.harmonicity_defect = std::max(rep.harmonicity_defect, std::abs(lap));
    }
  }
  {
    const cd zeta(0.0, 1.0);
    rep.sample_value_at_i =
        std::acosh(std::norm(std::cos(zeta)) + std::norm(std::sin(zeta)));
  }
  return rep;
}

RadialProfile radial_linear() {
  return {"s", [](double s) { return s; }, [](double) { return 1.0; },
          [](double) { return 0.0; }};
}
RadialProfile radial_quadratic() {
  return {"s + s^2/4", [](double s) { return s + 0.25 * s * s; },
          [](double s) { return 1.0 + 0.5 * s; }, [](double) { return 0.5; }};
}
RadialProfile radial_log() {
  return {"log(1+s)", [](double s) { return std::log1p(s); },
          [](double s) { return 1.0 / (1.0 + s); },
          [](double s) { return -1.0 / ((1.0 + s) * (1.0 + s)); }};
}

double radial_identity_probe(const RadialProfile& prof, int n, int samples, unsigned seed) {
  // analytic Hessian f' delta_ij + f'' conj(z_i) z_j against the closed form
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-0.7, 0.7);
  double worst = 0.0;
  std::vector<cd> H(n * n), z(n);
  for (int t = 0; t < samples; ++t) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
      z[a] = cd(U(rng), U(rng));
      s += std::norm(z[a]);
    }
    const double f1 = prof.f1(s), f2 = prof.f2(s);
    if (f1 <= 0.0 || f1 + s * f2 <= 0.0)
      fail(errc::precondition, "radial probe: profile not admissible at a sample");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        H[i * n + j] = (i == j ? cd(f1, 0.0) : cd(0.0)) + f2 * std::conj(z[i]) * z[j];
    const double expect = std::pow(f1, n - 1) * (f1 + s * f2);
    worst = std::max(worst, std::abs(leibniz_det(H.data(), n) - expect));
  }
  return worst;
}

DefectReport radial_residual_check(const RadialProfile& prof, const Grid& box) {
  if (box.kind() != grid::GridKind::box)
    fail(errc::invalid_input, "radial check: needs a box grid");
  const int n = box.ncomplex();
  auto uval = [&](const double* x) {
    double s = 0.0;
    for (int a = 0; a < 2 * n; ++a) s += x[a] * x[a];
    return prof.f(s);
  };
  ScalarField u = ScalarField::sample(box, uval);

  DefectReport rep;
  rep.max_h = box.max_h();
  grid::Walker w(box);
  std::vector<cd> H(n * n);
  std::vector<double> x(2 * n);
  for (std::size_t p = 0; p < box.count(); ++p, w.advance()) {
    box.coords(w.mi(), x.data());
    double s = 0.0;
    for (int a = 0; a < 2 * n; ++a) s += x[a] * x[a];
    const double f1 = prof.f1(s), f2 = prof.f2(s);
    if (f1 <= 0.0 || f1 + s * f2 <= 0.0)
      fail(errc::precondition, "radial check: profile not admissible on the grid");
    if (!box.is_interior(w.mi())) continue;
    grid::hessian_at(u, p, w.mi(), H.data());
    const double expect = std::pow(f1, n - 1) * (f1 + s * f2);
    rep.sup_defect =
        std::max(rep.sup_defect, std::abs(leibniz_det(H.data(), n).real() - expect));
    ++rep.points;
  }
  return rep;
}

ManufacturedCase make_manufactured(const ScalarField& u_star, const ma::MAProblem& templ) {
  const Grid& g = templ.gr;
  if (!g.same_layout(u_star.grid()))
    fail(errc::invalid_input, "manufactured: grid mismatch");
  auto [adm, lam] = ma::admissibility(u_star, templ);
  if (!adm) fail(errc::invalid_input, "manufactured: u_star not admissible for chi");
  (void)lam;

  const int nc = g.ncomplex();
  ManufacturedCase out;
  out.u_star = u_star;
  out.psi_star = ScalarField(g);
  grid::Walker w(g);
  std::vector<cd> H(nc * nc);
  for (std::size_t p = 0; p < g.count(); ++p, w.advance()) {
    if (!g.is_interior(w.mi())) continue;
    grid::hessian_at(u_star, p, w.mi(), H.data());
    Eigen::MatrixXcd chi = templ.chi.at(p);
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j) H[i * nc + j] += chi(i, j);
    Eigen::MatrixXcd gm = templ.g.at(p);
    std::vector<cd> G(std::size_t(nc) * nc);
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j) G[i * nc + j] = gm(i, j);
    const double detg = leibniz_det(G.data(), nc).real();
    out.psi_star[p] = leibniz_det(H.data(), nc).real() / detg;
  }
  if (g.kind() != grid::GridKind::torus) out.boundary = u_star;
  return out;
}

}  // namespace cma::oracle
