#include "cma/geodesic.hpp"

#include <cmath>

#include "cma/small_herm.hpp"
#include "cma/stencil.hpp"

namespace cma::geo {

using grid::Grid;
using grid::GridKind;
using grid::ScalarField;

void GeodesicProblem::validate() const {
  if (base.kind() != GridKind::torus) fail(errc::invalid_input, "geodesic: base must be a torus");
  if (!base.same_layout(phi0.grid()) || !base.same_layout(phi1.grid()))
    fail(errc::invalid_input, "geodesic: endpoint grids disagree");
  if (t_res < 4) fail(errc::invalid_input, "geodesic: t resolution below 4");
  const int n = base.ncomplex();
  for (const ScalarField* phi : {&phi0, &phi1}) {
    grid::Form11Field H = grid::complex_hessian(*phi);
    for (std::size_t p = 0; p < base.count(); ++p) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) + H.at(p);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() <= 0.0)
        fail(errc::invalid_input, "geodesic: endpoint potential is not admissible");
    }
  }
}

namespace {

// subsolution (1-t) phi0 + t phi1 + K (t^2 - t) sampled on the product grid
ScalarField subsolution_field(const GeodesicProblem& gp, const Grid& prod, double K) {
  ScalarField u(prod);
  const int t_axis = prod.naxes() - 1;
  grid::Walker w(prod);
  int bmi[8];
  for (std::size_t p = 0; p < prod.count(); ++p, w.advance()) {
    for (int a = 0; a < t_axis; ++a) bmi[a] = w.mi()[a];
    const std::size_t pb = gp.base.encode(bmi);
    const double t = prod.coord(t_axis, w.mi()[t_axis]);
    u[p] = (1.0 - t) * gp.phi0[pb] + t * gp.phi1[pb] + K * (t * t - t);
  }
  return u;
}

}  // namespace

LiftedProblem lift_problem(const GeodesicProblem& gp) {
  gp.validate();
  const int n = gp.base.ncomplex();
  Grid prod = grid::product_grid(gp.base, gp.t_res);

  Eigen::MatrixXcd gtilde = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  Eigen::MatrixXcd chitilde = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  chitilde.topLeftCorner(n, n) = Eigen::MatrixXcd::Identity(n, n);

  ScalarField boundary = subsolution_field(gp, prod, 0.0);  // matches phi0/phi1 at t = 0, 1

  double K = 1.0;
  ScalarField usub(prod);
  for (;;) {
    usub = subsolution_field(gp, prod, K);
    ma::MAProblem probe{prod, grid::Form11Field::constant(prod, gtilde),
                        grid::Form11Field::constant(prod, chitilde), ma::RHSSpec::zero(),
                        boundary, std::nullopt};
    auto [adm, lam] = ma::admissibility(usub, probe);
    bool det_ok = true;
    if (adm && lam >= 1e-3) {
      // det(omega_usub) >= 1 at interior points
      const int nc = prod.ncomplex();
      grid::Walker w(prod);
      std::vector<cd> H(nc * nc);
      for (std::size_t p = 0; p < prod.count() && det_ok; ++p, w.advance()) {
        if (!prod.is_interior(w.mi())) continue;
        grid::hessian_at(usub, p, w.mi(), H.data());
        for (int i = 0; i < nc; ++i)
          for (int j = 0; j < nc; ++j) H[i * nc + j] += chitilde(i, j);
        if (herm::det(H.data(), nc) < 1.0 - 1e-9) det_ok = false;
      }
      if (det_ok) break;
    } else {
      det_ok = false;
    }
    K *= 2.0;
    if (K > double(1 << 20))
      fail(errc::invalid_input, "geodesic: endpoints too wild for a K-subsolution");
  }

  LiftedProblem out;
  out.K = K;
  out.prob = ma::MAProblem{prod, grid::Form11Field::constant(prod, gtilde),
                           grid::Form11Field::constant(prod, chitilde), ma::RHSSpec::zero(),
                           boundary, usub};
  out.prob.validate();
  return out;
}

ScalarField slice(const ScalarField& phi, const Grid& base, int k) {
  const Grid& prod = phi.grid();
  ScalarField s(base);
  grid::Walker w(base);
  std::vector<int> pmi(prod.naxes());
  for (std::size_t pb = 0; pb < base.count(); ++pb, w.advance()) {
    for (int a = 0; a < base.naxes(); ++a) pmi[a] = w.mi()[a];
    pmi[prod.naxes() - 1] = k;
    s[pb] = phi[prod.encode(pmi.data())];
  }
  return s;
}

ScalarField geodesic_residual(const ScalarField& phi, const GeodesicProblem& gp,
                              std::vector<std::uint8_t>* valid_mask) {
  const Grid& prod = phi.grid();
  const Grid& base = gp.base;
  const int n = base.ncomplex();
  const int t_axis = prod.naxes() - 1;
  const double ht = prod.axis(t_axis).h();
  ScalarField res(prod);
  if (valid_mask) valid_mask->assign(prod.count(), 0);

  par::parallel_for(prod.count(), [&](std::size_t lo, std::size_t hi) {
    grid::Walker w(prod);
    w.seek(lo);
    std::vector<cd> G(n * n), Ginv(n * n), grad_dot(n);
    for (std::size_t p = lo; p < hi; ++p, w.advance()) {
      const int* mi = w.mi();
      if (mi[t_axis] == 0 || mi[t_axis] == prod.axis(t_axis).res - 1) continue;
      // base block of the lifted Hessian: I + phi_{i j~} within the slice
      for (int a = 0; a < n; ++a) {
        const int xa = prod.x_axis(a), ya = prod.y_axis(a);
        double diag = grid::d2_axis(phi, p, mi, xa) + grid::d2_axis(phi, p, mi, ya);
        G[a * n + a] = cd(1.0 + 0.25 * diag, 0.0);
        for (int b = a + 1; b < n; ++b) {
          const int xb = prod.x_axis(b), yb = prod.y_axis(b);
          const double re =
              grid::cross_axes(phi, p, mi, xa, xb) + grid::cross_axes(phi, p, mi, ya, yb);
          const double im =
              grid::cross_axes(phi, p, mi, xa, yb) - grid::cross_axes(phi, p, mi, ya, xb);
          G[a * n + b] = 0.25 * cd(re, im);
          G[b * n + a] = std::conj(G[a * n + b]);
        }
      }
      if (herm::lambda_min(G.data(), n) <= 0.0) continue;  // slice not admissible here
      if (valid_mask) (*valid_mask)[p] = 1;
      herm::inverse(G.data(), n, Ginv.data());

      const std::size_t pt_up = prod.neighbor(p, mi, t_axis, 1);
      const std::size_t pt_dn = prod.neighbor(p, mi, t_axis, -1);
      const double ddot = (phi[pt_up] - 2.0 * phi[p] + phi[pt_dn]) / (ht * ht);
      // grad of phi_t in the base directions: cross stencils commute exactly
      for (int a = 0; a < n; ++a) {
        const int xa = prod.x_axis(a), ya = prod.y_axis(a);
        // first differences of the central t-derivative
        auto dot_at = [&](std::size_t q, const int* qmi) {
          return (phi[prod.neighbor(q, qmi, t_axis, 1)] -
                  phi[prod.neighbor(q, qmi, t_axis, -1)]) /
                 (2.0 * ht);
        };
        int m2[8];
        for (int c = 0; c < prod.naxes(); ++c) m2[c] = mi[c];
        auto shift_dot = [&](int axis, int s) {
          const std::size_t q = prod.neighbor(p, mi, axis, s);
          m2[axis] = (mi[axis] + s + prod.axis(axis).res) % prod.axis(axis).res;
          const double v = dot_at(q, m2);
          m2[axis] = mi[axis];
          return v;
        };
        const double hx = prod.axis(xa).h(), hy = prod.axis(ya).h();
        const double ddx = (shift_dot(xa, 1) - shift_dot(xa, -1)) / (2.0 * hx);
        const double ddy = (shift_dot(ya, 1) - shift_dot(ya, -1)) / (2.0 * hy);
        grad_dot[a] = 0.5 * cd(ddx, -ddy);
      }
      double grad2 = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          grad2 += (Ginv[b * n + a] * grad_dot[a] * std::conj(grad_dot[b])).real();
      res[p] = ddot - grad2;
    }
  });
  return res;
}

double schur_identity_defect(const ScalarField& phi, const GeodesicProblem& gp) {
  const Grid& prod = phi.grid();
  const int nc = prod.ncomplex();
  const int n = nc - 1;
  std::vector<std::uint8_t> mask;
  ScalarField res = geodesic_residual(phi, gp, &mask);
  double worst = 0.0;
  grid::Walker w(prod);
  std::vector<cd> H(nc * nc), G(n * n);
  for (std::size_t p = 0; p < prod.count(); ++p, w.advance()) {
    if (!prod.is_interior(w.mi()) || !mask[p]) continue;
    grid::hessian_at(phi, p, w.mi(), H.data());
    for (int i = 0; i < n; ++i) H[i * nc + i] += 1.0;  // base block of the lift
    const double det_full = herm::det(H.data(), nc);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G[i * n + j] = H[i * nc + j];
    const double det_base = herm::det(G.data(), n);
    worst = std::max(worst, std::abs(det_full - det_base * 0.25 * res[p]));
  }
  return worst;
}

double path_length(const ScalarField& phi, const GeodesicProblem& gp) {
  const Grid& prod = phi.grid();
  const Grid& base = gp.base;
  const int n = base.ncomplex();
  const int t_axis = prod.naxes() - 1;
  const int tres = prod.axis(t_axis).res;
  const double ht = prod.axis(t_axis).h();
  const double cell = base.cell_volume();

  double L = 0.0;
  for (int k = 0; k + 1 < tres; ++k) {
    ScalarField a = slice(phi, base, k), b = slice(phi, base, k + 1);
    ScalarField mid(base), dot(base);
    for (std::size_t p = 0; p < base.count(); ++p) {
      mid[p] = 0.5 * (a[p] + b[p]);
      dot[p] = (b[p] - a[p]) / ht;
    }
    grid::Form11Field H = grid::complex_hessian(mid);
    double e = 0.0;
    for (std::size_t p = 0; p < base.count(); ++p) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) + H.at(p);
      e += dot[p] * dot[p] * m.determinant().real();
    }
    L += std::sqrt(std::max(0.0, e * cell)) * ht;
  }
  return L;
}

nlohmann::json GeodesicResult::manifest() const {
  nlohmann::json j;
  j["converged"] = converged;
  j["K"] = K;
  j["length"] = length;
  j["residual_sups"] = residual_sups;
  j["min_above_subsolution"] = min_above_subsolution;
  j["monotonicity_violation"] = monotonicity_violation;
  std::vector<double> eps;
  for (const auto& st : stages) eps.push_back(st.eps);
  j["eps_stages"] = eps;
  if (!stages.empty()) {
    const Grid& prod = stages.back().u.grid();
    const int t_axis = prod.naxes() - 1;
    std::vector<double> ts;
    for (int k = 0; k < prod.axis(t_axis).res; ++k) ts.push_back(prod.coord(t_axis, k));
    j["t_values"] = ts;
  }
  return j;
}

GeodesicResult solve_geodesic(const GeodesicProblem& gp,
                              const solve::ContinuationSchedule& sched) {
  LiftedProblem lifted = lift_problem(gp);

  // Drop leading eps stages above the subsolution's admissibility level.
  auto [sub_adm, sub_lam] = ma::admissibility(*lifted.prob.subsolution, lifted.prob);
  if (!sub_adm) fail(errc::internal, "geodesic: lifted subsolution not admissible");
  solve::ContinuationSchedule work = sched;
  while (work.eps_steps.size() > 2 && work.eps_steps.front() > sub_lam)
    work.eps_steps.erase(work.eps_steps.begin());

  GeodesicResult out;
  out.K = lifted.K;
  out.stages = solve::epsilon_sweep(lifted.prob, work);
  if (out.stages.empty()) fail(errc::internal, "geodesic: empty sweep");
  out.converged = out.stages.back().report.converged;

  double mono = 0.0, min_above = std::numeric_limits<double>::infinity();
  for (const auto& st : out.stages) {
    mono = std::max(mono, st.report.monotonicity_violation);
    ScalarField r = geodesic_residual(st.u, gp);
    out.residual_sups.push_back(r.sup_abs());
  }
  out.monotonicity_violation = mono;

  out.phi = out.stages.back().u;
  out.extrapolated = out.phi;
  const std::size_t m = out.stages.size();
  if (m >= 3 && out.converged) {
    double d1 = 0.0, d2 = 0.0;
    const auto& u0 = out.stages[m - 3].u;
    const auto& u1 = out.stages[m - 2].u;
    const auto& u2 = out.stages[m - 1].u;
    for (std::size_t p = 0; p < u2.size(); ++p) {
      d1 = std::max(d1, std::abs(u1[p] - u0[p]));
      d2 = std::max(d2, std::abs(u2[p] - u1[p]));
    }
    double theta = d1 > 0.0 ? d2 / d1 : 0.0;
    theta = std::min(theta, 0.9);
    const double w = theta / (1.0 - theta);
    for (std::size_t p = 0; p < u2.size(); ++p)
      out.extrapolated[p] = u2[p] + w * (u2[p] - u1[p]);
  }
  for (std::size_t p = 0; p < out.phi.size(); ++p)
    min_above = std::min(min_above, out.phi[p] - (*lifted.prob.subsolution)[p]);
  out.min_above_subsolution = min_above;
  out.length = path_length(out.extrapolated, gp);
  return out;
}

}  // namespace cma::geo
