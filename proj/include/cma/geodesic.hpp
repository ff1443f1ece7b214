#pragma once

// Geodesics in the space of torus metrics, computed through the lifted
// homogeneous Monge-Ampere problem on M x A with rotation-invariant data:
// the extra complex coordinate w = t + i s carries only its t axis, the lift
// of the base form keeps a zero w-block, and the Dirichlet data at t = 0, 1
// are the endpoint potentials. The epsilon sweep of the solver module does
// the actual work; the limit is Richardson-extrapolated across the last two
// stages.

#include "cma/solver.hpp"

namespace cma::geo {

struct GeodesicProblem {
  grid::Grid base;            // flat torus
  grid::ScalarField phi0;     // endpoint potentials on the base grid
  grid::ScalarField phi1;
  int t_res = 0;

  void validate() const;  // endpoints admissible, grids consistent
};

struct LiftedProblem {
  ma::MAProblem prob;  // product-grid HCMA problem with psi = 0
  double K = 0.0;      // recorded subsolution constant
};

// Builds the product problem with subsolution
// (1-t) phi0 + t phi1 + K (t^2 - t); K doubles from 1 until the subsolution
// is uniformly admissible (lambda_min >= 1e-3) and det(omega_usub) >= 1.
LiftedProblem lift_problem(const GeodesicProblem& gp);

// phi'' - g(phi)^{j k~} phi'_{z_j} phi'_{z~_k} at product interior points.
// Slices where omega_phi fails to be positive are masked invalid (residual 0,
// mask entry false).
grid::ScalarField geodesic_residual(const grid::ScalarField& phi, const GeodesicProblem& gp,
                                    std::vector<std::uint8_t>* valid_mask = nullptr);

// L(phi) = int_0^1 sqrt( int phi_t^2 omega_phi^n ) dt, midpoint rule in t.
double path_length(const grid::ScalarField& phi, const GeodesicProblem& gp);

// det(omega_phi-lift) - det(base block) * (phi'' - |grad phi'|^2)/4 at a
// product point set; returns the sup defect (the Schur-complement identity).
double schur_identity_defect(const grid::ScalarField& phi, const GeodesicProblem& gp);

struct GeodesicResult {
  bool converged = false;
  double K = 0.0;
  grid::ScalarField phi;           // smallest-eps stage field
  grid::ScalarField extrapolated;  // Richardson limit estimate
  std::vector<solve::EpsStage> stages;
  std::vector<double> residual_sups;  // per stage, over valid points
  double length = 0.0;                // of the extrapolated path
  double min_above_subsolution = 0.0; // min(phi - usub) over the grid
  double monotonicity_violation = 0.0;
  nlohmann::json manifest() const;
};

GeodesicResult solve_geodesic(const GeodesicProblem& gp,
                              const solve::ContinuationSchedule& sched);

// Base-slice extraction (t index k).
grid::ScalarField slice(const grid::ScalarField& phi, const grid::Grid& base, int k);

}  // namespace cma::geo
