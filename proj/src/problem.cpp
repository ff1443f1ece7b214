#include "cma/problem.hpp"

#include "cma/ma_ops.hpp"
#include "cma/small_herm.hpp"
#include "cma/stencil.hpp"

namespace cma::ma {

void MAProblem::validate() const {
  if (!rhs.valid()) fail(errc::invalid_input, "problem: missing rhs");
  if (!gr.same_layout(g.grid()) || !gr.same_layout(chi.grid()))
    fail(errc::invalid_input, "problem: field grids disagree");
  if (has_boundary_mask() && !boundary)
    fail(errc::invalid_input, "problem: bounded grid needs Dirichlet data");

  // psi >= 0 on a probe of u-values; monotonicity flags spot-checked.
  const double probes[] = {-2.0, 0.0, 2.0};
  const std::size_t step = std::max<std::size_t>(1, gr.count() / 64);
  for (std::size_t p = 0; p < gr.count(); p += step)
    for (double uv : probes) {
      const double psi = rhs.psi(gr, p, uv);
      if (psi < 0.0) fail(errc::invalid_input, "problem: psi < 0");
      if (rhs.flags().monotone && rhs.psi_u(gr, p, uv) < 0.0)
        fail(errc::invalid_input, "problem: monotone flag violated by samples");
      if (rhs.flags().strict_monotone && rhs.psi_u(gr, p, uv) <= 0.0)
        fail(errc::invalid_input, "problem: strict monotonicity violated by samples");
    }

  if (subsolution) {
    if (!gr.same_layout(subsolution->grid()))
      fail(errc::invalid_input, "problem: subsolution grid mismatch");
    if (boundary) {
      const double mis = boundary_mismatch(*subsolution, *boundary);
      if (mis > 1e-12)
        fail(errc::invalid_input, "problem: subsolution does not match boundary data");
    }
    // discrete subsolution inequality det(chi_u) >= psi(z, u) det g
    const grid::ScalarField res = ma_residual(*subsolution, *this);
    grid::Walker w(gr);
    for (std::size_t p = 0; p < gr.count(); ++p, w.advance()) {
      if (!gr.is_interior(w.mi())) continue;
      if (res[p] < -1e-10)
        fail(errc::invalid_input, "problem: subsolution inequality fails at an interior point");
    }
  }
}

MAProblem torus_problem(const grid::Grid& gr, grid::Form11Field g, grid::Form11Field chi,
                        RHSSpec rhs) {
  MAProblem p{gr, std::move(g), std::move(chi), std::move(rhs), std::nullopt, std::nullopt};
  p.validate();
  return p;
}

MAProblem box_problem(const grid::Grid& gr, grid::Form11Field g, grid::Form11Field chi,
                      RHSSpec rhs, grid::ScalarField boundary,
                      std::optional<grid::ScalarField> subsolution) {
  MAProblem p{gr, std::move(g), std::move(chi), std::move(rhs), std::move(boundary),
              std::move(subsolution)};
  p.validate();
  return p;
}

void impose_boundary(grid::ScalarField& dst, const grid::ScalarField& src) {
  const grid::Grid& g = dst.grid();
  grid::Walker w(g);
  for (std::size_t p = 0; p < g.count(); ++p, w.advance())
    if (!g.is_interior(w.mi())) dst[p] = src[p];
}

double boundary_mismatch(const grid::ScalarField& a, const grid::ScalarField& b) {
  const grid::Grid& g = a.grid();
  double m = 0.0;
  grid::Walker w(g);
  for (std::size_t p = 0; p < g.count(); ++p, w.advance())
    if (!g.is_interior(w.mi())) m = std::max(m, std::abs(a[p] - b[p]));
  return m;
}

}  // namespace cma::ma
