#pragma once

// The full statement of the discrete Monge-Ampere problem: grid, background
// metric, chi, right-hand side, Dirichlet data on bounded grids, and an
// optional subsolution verified at construction.

#include <optional>

#include "cma/rhs.hpp"

namespace cma::ma {

struct MAProblem {
  grid::Grid gr;
  grid::Form11Field g;     // background metric
  grid::Form11Field chi;
  RHSSpec rhs;
  std::optional<grid::ScalarField> boundary;     // required on bounded grids
  std::optional<grid::ScalarField> subsolution;  // must satisfy the discrete
                                                 // subsolution inequality

  bool has_boundary_mask() const { return gr.kind() != grid::GridKind::torus; }
  void validate() const;
};

MAProblem torus_problem(const grid::Grid& gr, grid::Form11Field g, grid::Form11Field chi,
                        RHSSpec rhs);
MAProblem box_problem(const grid::Grid& gr, grid::Form11Field g, grid::Form11Field chi,
                      RHSSpec rhs, grid::ScalarField boundary,
                      std::optional<grid::ScalarField> subsolution = std::nullopt);

// Install values of src on the boundary mask of dst (dst interior untouched).
void impose_boundary(grid::ScalarField& dst, const grid::ScalarField& src);

// max over boundary points of |a - b|
double boundary_mismatch(const grid::ScalarField& a, const grid::ScalarField& b);

}  // namespace cma::ma
