#pragma once

// Closed-form and brute-force reference computations that anchor the solver
// tests: the |Im z| and quadric explicit solutions, radial-profile
// determinants, and manufactured cases. Determinants here go through a
// dedicated Leibniz expansion so no bug can be shared with the solver path.

#include "cma/ma_ops.hpp"

#include "json.hpp"

namespace cma::oracle {

// Permutation-expansion determinant (independent of the solver's path).
cd leibniz_det(const cd* M, int nc);

struct DefectReport {
  double sup_defect = 0.0;
  double max_h = 0.0;
  std::size_t points = 0;
  nlohmann::json to_json() const;
};

// sup over interior points of |det(discrete dd~ |Im z|)| on a box kept at
// least safety * h away from R^n (safety >= 3 enforced).
DefectReport im_abs_check(const grid::Grid& box, int safety);

struct QuadricReport {
  double pullback_defect = 0.0;     // sup |acosh(|z|^2) - 2 Im zeta|
  double harmonicity_defect = 0.0;  // sup |discrete zeta-Laplacian|
  double sample_value_at_i = 0.0;   // u at zeta = i (closed form: 2)
  nlohmann::json to_json() const;
};

// n = 1 affine-quadric pullback along z = (cos zeta, sin zeta), checked on
// [0, 2 pi] x [eta_lo, eta_hi] with eta_lo > 0.
QuadricReport quadric_pullback_check(double eta_lo, double eta_hi, int res);

struct RadialProfile {
  std::string name;
  std::function<double(double)> f, f1, f2;  // f(s), f'(s), f''(s)
};
RadialProfile radial_linear();       // f(s) = s
RadialProfile radial_quadratic();    // f(s) = s + s^2/4
RadialProfile radial_log();          // f(s) = log(1 + s)

// |discrete det(dd~ f(|z|^2)) - (f')^{n-1}(f' + s f'')| over the box interior.
// The identity itself is first validated by brute-force expansion of the
// analytic Hessian at random points (radial_identity_probe).
DefectReport radial_residual_check(const RadialProfile& prof, const grid::Grid& box);
double radial_identity_probe(const RadialProfile& prof, int n, int samples, unsigned seed);

struct ManufacturedCase {
  grid::ScalarField u_star;
  grid::ScalarField psi_star;                     // per-point Leibniz determinant ratio
  std::optional<grid::ScalarField> boundary;      // restriction on bounded grids
};

// psi* from the DISCRETE Hessian of u*: the induced residual vanishes
// identically (to roundoff). For convergence-order studies build psi from the
// analytic Hessian instead and sample it with RHSSpec::from_function.
ManufacturedCase make_manufactured(const grid::ScalarField& u_star,
                                   const ma::MAProblem& templ);

}  // namespace cma::oracle
