#include <cmath>

#include "cma/solver.hpp"
#include "cma/stencil.hpp"
#include "doctest.h"

using namespace cma;
using namespace cma::grid;
using namespace cma::ma;
using namespace cma::solve;

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXcd idm(int n) { return Eigen::MatrixXcd::Identity(n, n); }

MAProblem flat_torus(int n, int N, RHSSpec rhs) {
  Grid t = torus_grid_uniform(n, 2 * kPi, N);
  return torus_problem(t, Form11Field::constant(t, idm(n)), Form11Field::constant(t, idm(n)),
                       std::move(rhs));
}

// analytic data for u* = A sin(x1) cos(y2) on the n=2 torus with chi = omega
double ustar2(const double* x) { return 0.1 * std::sin(x[0]) * std::cos(x[3]); }
double psistar2(const double* x) {
  const double h = -0.025 * std::sin(x[0]) * std::cos(x[3]);       // diagonal entries
  const double c = -0.025 * std::cos(x[0]) * std::sin(x[3]);       // imag part of H12
  return (1.0 + h) * (1.0 + h) - c * c;
}

NewtonConfig tight_newton() {
  NewtonConfig cfg;
  cfg.residual_tol = 1e-11;
  cfg.lin.tol = 1e-12;
  return cfg;
}
}  // namespace

TEST_CASE("newton: exact seed costs zero iterations") {
  MAProblem p = flat_torus(1, 8, RHSSpec::constant(1.0));
  ScalarField u0(p.gr);
  auto [u, rep] = newton_solve(p, u0, tight_newton());
  CHECK(rep.converged);
  CHECK(rep.iterations[0] == 0);
  CHECK(u.sup_abs() == 0.0);
}

TEST_CASE("newton: manufactured torus solution recovered to O(h^2)") {
  for (int N : {12, 24}) {
    Grid t = torus_grid_uniform(2, 2 * kPi, N);
    MAProblem p = flat_torus(2, N, RHSSpec::from_function(psistar2, false));
    ContinuationSchedule sched;
    sched.newton = tight_newton();
    auto [u, rep] = torus_calabi_solve(p, sched);
    REQUIRE(rep.converged);
    ScalarField exact = ScalarField::sample(t, ustar2);
    double err = 0.0;
    for (std::size_t q = 0; q < t.count(); ++q) err = std::max(err, std::abs(u[q] - exact[q]));
    const double h = 2 * kPi / N;
    CHECK(err < 0.6 * h * h);
    CHECK(std::abs(rep.mean_integral) < 1e-12 * std::pow(2 * kPi, 4));
  }
}

TEST_CASE("newton: barely admissible far seed stays admissible via damping") {
  Grid b = box_grid_uniform(1, -0.5, 0.5, 17);
  const double c = 1.0 - 1e-3;
  ScalarField u0 = ScalarField::sample(
      b, [&](const double* x) { return -c * (x[0] * x[0] + x[1] * x[1]); });
  MAProblem p = box_problem(b, Form11Field::constant(b, idm(1)),
                            Form11Field::constant(b, idm(1)), RHSSpec::constant(1.0), u0);
  auto [adm0, lam0] = admissibility(u0, p);
  REQUIRE(adm0);
  CHECK(lam0 == doctest::Approx(1e-3).epsilon(1e-6));
  auto [u, rep] = newton_solve(p, u0, tight_newton());
  CHECK(rep.converged);
  auto [admf, lamf] = admissibility(u, p);
  CHECK(admf);
  CHECK(lamf > 1e-4);  // never collapsed below the floor
}

TEST_CASE("continuation: psi = e^u keeps u identically zero along the whole path") {
  MAProblem p = flat_torus(2, 8, RHSSpec::exp_u());
  ContinuationSchedule sched = ContinuationSchedule::defaults();
  sched.newton = tight_newton();
  auto [u, rep] = continuation_solve(p, sched);
  CHECK(rep.converged);
  CHECK(u.sup_abs() < 1e-10);
  for (int its : rep.iterations) CHECK(its == 0);
  CHECK(rep.max_principle_defect >= -1e-6);
}

TEST_CASE("continuation: profiled psi converges and matches a perturbed-seed direct solve") {
  Grid t = torus_grid_uniform(2, 2 * kPi, 8);
  ScalarField prof =
      ScalarField::sample(t, [](const double* x) { return 1.0 + 0.1 * std::sin(x[0]); });
  MAProblem p = flat_torus(2, 8, RHSSpec::exp_u_profile(prof));
  ContinuationSchedule sched = ContinuationSchedule::defaults();
  sched.newton = tight_newton();
  auto [u, rep] = continuation_solve(p, sched);
  REQUIRE(rep.converged);
  CHECK(rep.final_residual <= sched.newton.residual_tol);

  // uniqueness: a perturbed seed driven by plain Newton lands on the same u
  ScalarField seed = ScalarField::sample(
      t, [](const double* x) { return 0.01 * std::cos(x[1] + x[2]); });
  auto [u2, rep2] = newton_solve(p, seed, tight_newton());
  REQUIRE(rep2.converged);
  double diff = 0.0;
  for (std::size_t q = 0; q < t.count(); ++q) diff = std::max(diff, std::abs(u[q] - u2[q]));
  CHECK(diff < 1e-8);
}

TEST_CASE("calabi: psi = 1 gives u = 0; scaling psi by 7 is undone exactly") {
  MAProblem p = flat_torus(2, 8, RHSSpec::constant(1.0));
  ContinuationSchedule sched;
  sched.newton = tight_newton();
  auto [u, rep] = torus_calabi_solve(p, sched);
  CHECK(rep.converged);
  CHECK(u.sup_abs() < 1e-12);
  CHECK(rep.rescale_constant == doctest::Approx(1.0).epsilon(1e-12));

  MAProblem p7 = flat_torus(2, 8, RHSSpec::constant(7.0));
  auto [u7, rep7] = torus_calabi_solve(p7, sched);
  CHECK(rep7.converged);
  CHECK(std::abs(rep7.rescale_constant - 1.0 / 7.0) < 1e-10);
  CHECK(u7.sup_abs() < 1e-12);
}

TEST_CASE("calabi rejects incompatible input masquerading as u-dependent") {
  MAProblem p = flat_torus(1, 8, RHSSpec::exp_u());
  ContinuationSchedule sched;
  CHECK_THROWS_AS((void)torus_calabi_solve(p, sched), const error&);
}

TEST_CASE("dirichlet: equality-case subsolution reproduces u = 0") {
  Grid b = box_grid_uniform(1, 0.0, 1.0, 17);
  ScalarField zero(b);
  // psi = det chi / det g = 1 with u = 0, boundary 0
  MAProblem p = box_problem(b, Form11Field::constant(b, idm(1)),
                            Form11Field::constant(b, idm(1)), RHSSpec::constant(1.0), zero, zero);
  ContinuationSchedule sched;
  sched.newton = tight_newton();
  auto [u, rep] = dirichlet_solve(p, sched);
  CHECK(rep.converged);
  CHECK(u.sup_abs() < 1e-12);
  CHECK(rep.subsolution_gap <= 1e-10);
  CHECK(rep.barrier_gap <= 1e-10);
}

TEST_CASE("dirichlet: manufactured box problem with a strict subsolution sandwich") {
  Grid b = box_grid_uniform(1, 0.0, 1.0, 21);
  auto ustar = [](const double* x) {
    return x[0] * x[0] + 0.5 * x[1] * x[1] + 0.05 * std::sin(2 * x[0]) * std::cos(x[1]);
  };
  auto psistar = [](const double* x) {
    // quarter-Laplacian of ustar (chi = 0, n = 1)
    const double uxx = 2.0 - 0.2 * std::sin(2 * x[0]) * std::cos(x[1]);
    const double uyy = 1.0 - 0.05 * std::sin(2 * x[0]) * std::cos(x[1]);
    return 0.25 * (uxx + uyy);
  };
  ScalarField exact = ScalarField::sample(b, ustar);
  ScalarField boundary = exact;

  // strict subsolution: lower the exact solution by the discrete torsion
  // bubble (Delta q = -1, q = 0 on the boundary)
  Form11Field gI = Form11Field::constant(b, idm(1));
  ScalarField minus_one(b, -1.0);
  ScalarField q = solve_poisson_dirichlet(b, gI, minus_one, ScalarField(b));
  ScalarField usub = exact;
  for (std::size_t i = 0; i < usub.size(); ++i) usub[i] -= 0.05 * q[i];

  MAProblem p = box_problem(b, gI, Form11Field::constant(b, Eigen::MatrixXcd::Zero(1, 1)),
                            RHSSpec::from_function(psistar, false), boundary, usub);
  ContinuationSchedule sched;
  sched.newton = tight_newton();
  auto [u, rep] = dirichlet_solve(p, sched);
  REQUIRE(rep.converged);
  const double h = b.axis(0).h();
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - exact[i]));
  CHECK(err < 1.0 * h * h);
  CHECK(rep.subsolution_gap <= 1e-10);  // u >= usub
  CHECK(rep.barrier_gap <= 1e-8);       // u <= h barrier
}

TEST_CASE("epsilon sweep: n=1 HCMA tends to the harmonic extension, monotone in eps") {
  Grid b = box_grid_uniform(1, 0.0, 1.0, 33);
  auto phi = [](const double* x) { return x[0] * x[0]; };  // restriction of x^2, psh
  ScalarField boundary = ScalarField::sample(b, phi);
  ScalarField usub = ScalarField::sample(b, phi);  // chi_usub = 1/2 > 0, psi = 0 below it
  MAProblem p = box_problem(b, Form11Field::constant(b, idm(1)),
                            Form11Field::constant(b, Eigen::MatrixXcd::Zero(1, 1)),
                            RHSSpec::zero(), boundary, usub);
  ContinuationSchedule sched;
  sched.newton = tight_newton();
  sched.newton.residual_tol = 1e-10;  // the degenerate stages sit at the linear-solve floor
  sched.eps_steps = {1e-1, 1e-2, 1e-3, 1e-4};
  auto stages = epsilon_sweep(p, sched);
  REQUIRE(stages.size() == 4);
  for (const auto& st : stages) {
    CHECK(st.report.converged);
    CHECK(st.report.monotonicity_violation <= 1e-8);
    CHECK(st.report.subsolution_gap <= 1e-10);
  }
  // direct harmonic extension of the same data
  Form11Field gI = Form11Field::constant(b, idm(1));
  ScalarField harm = solve_poisson_dirichlet(b, gI, ScalarField(b), boundary);
  double dist = 0.0;
  for (std::size_t i = 0; i < harm.size(); ++i)
    dist = std::max(dist, std::abs(stages.back().u[i] - harm[i]));
  CHECK(dist < 5e-3);
  // C^1 uniformity: sup |grad u| drifts < 10 percent across two decades
  const double g0 = stages[1].report.monitors[0].grad_sup;
  const double g1 = stages[3].report.monitors[0].grad_sup;
  CHECK(std::abs(g1 - g0) <= 0.1 * std::max(g0, g1));
}

TEST_CASE("epsilon sweep: nondegenerate psi = 1 collapses to a single fixed point") {
  Grid b = box_grid_uniform(1, 0.0, 1.0, 17);
  auto bump = [](const double* x) { return x[0] * x[0] + x[1] * x[1]; };
  ScalarField boundary = ScalarField::sample(b, bump);
  ScalarField usub = boundary;
  MAProblem p = box_problem(b, Form11Field::constant(b, idm(1)),
                            Form11Field::constant(b, Eigen::MatrixXcd::Zero(1, 1)),
                            RHSSpec::constant(1.0), boundary, usub);
  ContinuationSchedule sched;
  sched.newton = tight_newton();
  sched.eps_steps = {0.5, 0.25, 0.1};
  auto stages = epsilon_sweep(p, sched);
  REQUIRE(stages.size() == 3);
  double diff = 0.0;
  for (std::size_t i = 0; i < stages[1].u.size(); ++i)
    diff = std::max(diff, std::abs(stages[2].u[i] - stages[1].u[i]));
  CHECK(diff < 1e-10);
}

TEST_CASE("comparison principle: larger rhs forces a smaller solution") {
  Grid b = box_grid_uniform(1, 0.0, 1.0, 17);
  auto bump = [](const double* x) { return x[0] * x[0] + x[1] * x[1]; };
  ScalarField boundary = ScalarField::sample(b, bump);
  MAProblem pa = box_problem(b, Form11Field::constant(b, idm(1)),
                             Form11Field::constant(b, Eigen::MatrixXcd::Zero(1, 1)),
                             RHSSpec::constant(1.0), boundary, boundary);
  MAProblem pb = box_problem(b, Form11Field::constant(b, idm(1)),
                             Form11Field::constant(b, Eigen::MatrixXcd::Zero(1, 1)),
                             RHSSpec::constant(0.5), boundary, boundary);
  ContinuationSchedule sched;
  sched.newton = tight_newton();
  CHECK(comparison_gap(pa, pb, sched) <= 1e-8);
}

TEST_CASE("repeated solves are bit-identical") {
  MAProblem p = flat_torus(2, 8, RHSSpec::from_function(psistar2, false));
  ContinuationSchedule sched;
  sched.newton = tight_newton();
  auto [ua, ra] = torus_calabi_solve(p, sched);
  auto [ub, rb] = torus_calabi_solve(p, sched);
  REQUIRE(ra.converged);
  CHECK(ra.iterations == rb.iterations);
  for (std::size_t q = 0; q < ua.size(); ++q) CHECK(ua[q] == ub[q]);
}

TEST_CASE("solve report serializes with the documented key set") {
  MAProblem p = flat_torus(1, 8, RHSSpec::constant(1.0));
  ContinuationSchedule sched;
  sched.newton = tight_newton();
  auto [u, rep] = torus_calabi_solve(p, sched);
  nlohmann::json j = rep.to_json();
  for (const char* key : {"converged", "iterations", "stage_values", "final_residual",
                          "rescale_constant", "mean_integral", "monitors"})
    CHECK(j.contains(key));
}
