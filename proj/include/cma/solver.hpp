#pragma once

// Damped Newton on the log form of the Monge-Ampere equation, the
// s-continuation path, the compatibility-normalized torus solve, the
// Dirichlet solve with subsolution/barrier comparison, and the epsilon
// regularization sweep for degenerate right-hand sides. Every accepted
// iterate stays admissible and boundary-exact; all reductions are
// deterministic so reruns are bit-identical.

#include "cma/linsolve.hpp"

#include "json.hpp"

namespace cma::solve {

struct NewtonConfig {
  int max_iter = 40;
  double residual_tol = 1e-10;   // sup norm of the log-form residual
  double min_damping = 1e-6;
  double admissibility_floor = 0.1;  // sigma: lambda_min kept above sigma * lambda_min(u0)
  LinSolveOptions lin;
};

struct ContinuationSchedule {
  std::vector<double> s_steps;    // increasing, 0 .. 1
  std::vector<double> eps_steps;  // strictly decreasing, positive
  NewtonConfig newton;

  void validate() const;
  static ContinuationSchedule defaults();
};

struct StageMonitor {
  double grad_sup = 0.0;
  double lap_sup = 0.0;
  double boundary_grad_sup = 0.0;
  double boundary_lap_sup = 0.0;
  double lambda_min = 0.0;
  // interior/boundary ratios; -1 encodes the 0/0 sentinel
  double grad_ratio = -1.0;
  double lap_ratio = -1.0;
};

struct SolveReport {
  bool converged = false;
  std::vector<int> iterations;      // per stage
  std::vector<double> stage_values; // s or eps per stage
  std::vector<StageMonitor> monitors;
  double final_residual = 0.0;
  double rescale_constant = 1.0;    // compatibility constant (torus solve)
  double mean_integral = 0.0;       // int u omega^n after projection
  double subsolution_gap = 0.0;     // max(0, sup(usub - u))
  double barrier_gap = 0.0;         // max(0, sup(u - h))
  double max_principle_defect = 0.0;
  double monotonicity_violation = 0.0;  // eps sweep
  std::string note;

  nlohmann::json to_json() const;
};

StageMonitor estimate_monitor(const grid::ScalarField& u, const ma::MAProblem& prob);

// One Newton stage. u is the initial iterate and is updated in place; on box
// grids it must carry the Dirichlet data on the boundary mask already. With
// mean_zero set, the constant direction is projected out and the solvable
// shift beta is returned (the equation actually solved is
// log det(chi_u) = log(psi det g) + beta).
struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  double shift = 0.0;
  std::string reason;
};
NewtonOutcome newton_stage(const ma::MAProblem& prob, grid::ScalarField& u,
                           const NewtonConfig& cfg, bool mean_zero);

// Volume-weighted mean (with respect to omega^n) on tori.
double mean_omega(const grid::ScalarField& u, const ma::MAProblem& prob);

std::pair<grid::ScalarField, SolveReport> newton_solve(const ma::MAProblem& prob,
                                                       const grid::ScalarField& u0,
                                                       const NewtonConfig& cfg);

// psi^s = (1-s) e^u + s psi with strict monotone psi; torus only.
std::pair<grid::ScalarField, SolveReport> continuation_solve(const ma::MAProblem& prob,
                                                             const ContinuationSchedule& sched);

// u-independent psi on a torus: rescales psi for compatibility, solves with
// the mean-zero normalization, reports the effective constant.
std::pair<grid::ScalarField, SolveReport> torus_calabi_solve(const ma::MAProblem& prob,
                                                             const ContinuationSchedule& sched);

// Box Dirichlet problem with verified subsolution; checks the
// subsolution/barrier sandwich usub <= u <= h.
std::pair<grid::ScalarField, SolveReport> dirichlet_solve(const ma::MAProblem& prob,
                                                          const ContinuationSchedule& sched);

struct EpsStage {
  double eps = 0.0;
  grid::ScalarField u;
  SolveReport report;
};

// Degenerate psi >= 0: solve the band-regularized problems along eps_steps,
// warm-started, with pointwise band assertions and the monotone-comparison
// check across stages. A failed stage truncates the sweep.
std::vector<EpsStage> epsilon_sweep(const ma::MAProblem& prob,
                                    const ContinuationSchedule& sched);

// Comparison-principle check helper: solves the problem with each rhs and
// returns sup(u_a - u_b) for psi_a >= psi_b (expected <= tolerance).
double comparison_gap(const ma::MAProblem& prob_a, const ma::MAProblem& prob_b,
                      const ContinuationSchedule& sched);

}  // namespace cma::solve
