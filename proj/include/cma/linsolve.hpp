#pragma once

// Linear solves for the Newton steps: sparse-direct for small problems,
// matrix-free BiCGSTAB with a constant-coefficient spectral preconditioner
// (FFT on tori, sine transforms on boxes, pointwise Jacobi on mixed product
// grids) for large ones. All reductions use fixed-chunk deterministic
// summation, so repeated solves are bit-identical.

#include "cma/ma_ops.hpp"

namespace cma::solve {

struct LinSolveOptions {
  double tol = 1e-11;  // relative l2 residual
  int max_iter = 600;
  bool project_mean = false;          // factor out the constant kernel (torus)
  std::size_t direct_threshold = 6000;
};

struct LinSolveStats {
  int iterations = 0;
  double rel_residual = 0.0;
  bool used_direct = false;
  bool converged = false;
};

// Solves L x = b for the interior unknowns; x carries zeros on the boundary
// mask. b entries outside the interior are ignored.
LinSolveStats solve_linear(const ma::LinearizedOp& L, const std::vector<double>& b,
                           std::vector<double>& x, const LinSolveOptions& opt);

// Dirichlet solve of  g^{i j~} v_{i j~} = rhs  with v = bdata on the boundary
// mask (used for harmonic barriers and linearized references).
grid::ScalarField solve_poisson_dirichlet(const grid::Grid& gr, const grid::Form11Field& g,
                                          const grid::ScalarField& rhs,
                                          const grid::ScalarField& bdata);

}  // namespace cma::solve
