#pragma once

// Second-order stencil calculus on grid fields: the discrete complex Hessian
// (axis second differences plus four-point cross differences), complex
// gradients, the Chern Laplacian, and midpoint integration on tori. The
// Hessian assembly is arranged so each per-point matrix is Hermitian exactly,
// not just to rounding.

#include "cma/field.hpp"

namespace cma::grid {

// Axis stencils at a point whose needed neighbors exist (interior, or any
// point on periodic axes).
double d2_axis(const ScalarField& u, std::size_t p, const int* mi, int a);
double d1_axis(const ScalarField& u, std::size_t p, const int* mi, int a);
double cross_axes(const ScalarField& u, std::size_t p, const int* mi, int a, int b);

// One-sided/central first and second derivatives valid at any point
// (second order; used by boundary monitors).
double d1_general(const ScalarField& u, std::size_t p, const int* mi, int a);
double d2_general(const ScalarField& u, std::size_t p, const int* mi, int a);
double cross_general(const ScalarField& u, const int* mi, int a, int b);

// Discrete complex Hessian u_{a b~} at an interior point; H is nc x nc
// row-major. Hermitian by construction.
void hessian_at(const ScalarField& u, std::size_t p, const int* mi, cd* H);

// Complex gradient u_a = (d/dx_a - i d/dy_a)/2 u via central differences.
void gradient_at(const ScalarField& u, std::size_t p, const int* mi, cd* grad);
// Same but valid on boundary points (one-sided where needed).
void gradient_general(const ScalarField& u, std::size_t p, const int* mi, cd* grad);

// Field-level wrappers. complex_hessian is defined at interior points only on
// bounded grids (other points stay zero); nothing is ever extrapolated.
Form11Field complex_hessian(const ScalarField& u);

// sup over stencil-valid points of |grad u|_g = sqrt(g^{a b~} u_a u_b~).
double gradient_sup(const ScalarField& u, const Form11Field& g);

// g^{a b~} u_{a b~}; the imaginary residue must stay below 1e-12 (relative)
// or an internal-consistency error is raised.
ScalarField chern_laplacian(const ScalarField& u, const Form11Field& g);

// Midpoint quadrature of f * det(vol) over a torus.
double integrate(const ScalarField& f, const Form11Field& vol);

}  // namespace cma::grid
