#pragma once

// Right-hand-side specification psi(z, u) with its u-derivative and the
// structural flags the solvers dispatch on. Combinators cover the
// continuation blend (1-s) e^u + s psi and the band-respecting
// regularization of a degenerate psi.

#include <functional>
#include <memory>

#include "cma/field.hpp"

namespace cma::ma {

struct RHSFlags {
  bool degenerate = false;       // psi may vanish
  bool monotone = false;         // psi_u >= 0
  bool strict_monotone = false;  // psi_u > 0
  bool u_independent = false;
};

class RHSSpec {
public:
  using Fn = std::function<double(const grid::Grid&, std::size_t, double)>;

  RHSSpec() = default;
  RHSSpec(Fn psi, Fn psi_u, RHSFlags flags)
      : psi_(std::move(psi)), psi_u_(std::move(psi_u)), flags_(flags) {}

  double psi(const grid::Grid& g, std::size_t p, double u) const { return psi_(g, p, u); }
  double psi_u(const grid::Grid& g, std::size_t p, double u) const { return psi_u_(g, p, u); }
  const RHSFlags& flags() const { return flags_; }
  bool valid() const { return bool(psi_); }

  static RHSSpec constant(double c);
  static RHSSpec zero();
  static RHSSpec exp_u();
  // e^u * w(z) with w > 0 sampled on the grid
  static RHSSpec exp_u_profile(grid::ScalarField w);
  static RHSSpec from_field(grid::ScalarField psi_samples);
  static RHSSpec from_function(std::function<double(const double*)> fn, bool degenerate);
  static RHSSpec scaled(const RHSSpec& inner, double c);
  // psi^s(z,u) = (1-s) e^u + s psi(z,u)
  static RHSSpec continuation_blend(const RHSSpec& inner, double s);
  // psi^eps: equals psi above eps^dim and eps^dim/2 + psi^2/(2 eps^dim) below,
  // which stays inside the required band [sup{psi-eps, eps^dim/2},
  // sup{psi, eps^dim}] everywhere.
  static RHSSpec band_regularized(const RHSSpec& inner, double eps, int dim);

  static double band_lo(double psi, double eps, int dim);
  static double band_hi(double psi, double eps, int dim);
  static double regularize_value(double psi, double eps_pow);

private:
  Fn psi_, psi_u_;
  RHSFlags flags_;
};

}  // namespace cma::ma
