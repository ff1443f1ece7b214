#include "cma/rhs.hpp"

#include <cmath>

namespace cma::ma {

RHSSpec RHSSpec::constant(double c) {
  if (c < 0.0) fail(errc::invalid_input, "rhs: psi must be nonnegative");
  RHSFlags f;
  f.degenerate = c == 0.0;
  f.monotone = true;
  f.u_independent = true;
  return RHSSpec([c](const grid::Grid&, std::size_t, double) { return c; },
                 [](const grid::Grid&, std::size_t, double) { return 0.0; }, f);
}

RHSSpec RHSSpec::zero() { return constant(0.0); }

RHSSpec RHSSpec::exp_u() {
  RHSFlags f;
  f.monotone = true;
  f.strict_monotone = true;
  return RHSSpec([](const grid::Grid&, std::size_t, double u) { return std::exp(u); },
                 [](const grid::Grid&, std::size_t, double u) { return std::exp(u); }, f);
}

RHSSpec RHSSpec::exp_u_profile(grid::ScalarField w) {
  auto shared = std::make_shared<grid::ScalarField>(std::move(w));
  for (std::size_t p = 0; p < shared->size(); ++p)
    if ((*shared)[p] <= 0.0) fail(errc::invalid_input, "rhs: profile must be positive");
  RHSFlags f;
  f.monotone = true;
  f.strict_monotone = true;
  return RHSSpec(
      [shared](const grid::Grid&, std::size_t p, double u) { return std::exp(u) * (*shared)[p]; },
      [shared](const grid::Grid&, std::size_t p, double u) { return std::exp(u) * (*shared)[p]; },
      f);
}

RHSSpec RHSSpec::from_field(grid::ScalarField psi_samples) {
  auto shared = std::make_shared<grid::ScalarField>(std::move(psi_samples));
  bool degenerate = false;
  for (std::size_t p = 0; p < shared->size(); ++p) {
    if ((*shared)[p] < 0.0) fail(errc::invalid_input, "rhs: psi must be nonnegative");
    if ((*shared)[p] == 0.0) degenerate = true;
  }
  RHSFlags f;
  f.degenerate = degenerate;
  f.monotone = true;
  f.u_independent = true;
  return RHSSpec(
      [shared](const grid::Grid&, std::size_t p, double) { return (*shared)[p]; },
      [](const grid::Grid&, std::size_t, double) { return 0.0; }, f);
}

RHSSpec RHSSpec::from_function(std::function<double(const double*)> fn, bool degenerate) {
  RHSFlags f;
  f.degenerate = degenerate;
  f.monotone = true;
  f.u_independent = true;
  auto eval = [fn](const grid::Grid& g, std::size_t p, double) {
    std::vector<int> mi(g.naxes());
    std::vector<double> x(g.naxes());
    g.decode(p, mi.data());
    g.coords(mi.data(), x.data());
    return fn(x.data());
  };
  return RHSSpec(eval, [](const grid::Grid&, std::size_t, double) { return 0.0; }, f);
}

RHSSpec RHSSpec::scaled(const RHSSpec& inner, double c) {
  if (c <= 0.0) fail(errc::invalid_input, "rhs: scale must be positive");
  RHSFlags f = inner.flags();
  RHSSpec in = inner;
  return RHSSpec(
      [in, c](const grid::Grid& g, std::size_t p, double u) { return c * in.psi(g, p, u); },
      [in, c](const grid::Grid& g, std::size_t p, double u) { return c * in.psi_u(g, p, u); },
      f);
}

RHSSpec RHSSpec::continuation_blend(const RHSSpec& inner, double s) {
  if (s < 0.0 || s > 1.0) fail(errc::invalid_input, "rhs: blend parameter outside [0,1]");
  RHSFlags f;
  f.monotone = true;
  f.strict_monotone = s < 1.0 || inner.flags().strict_monotone;
  RHSSpec in = inner;
  return RHSSpec(
      [in, s](const grid::Grid& g, std::size_t p, double u) {
        return (1.0 - s) * std::exp(u) + s * in.psi(g, p, u);
      },
      [in, s](const grid::Grid& g, std::size_t p, double u) {
        return (1.0 - s) * std::exp(u) + s * in.psi_u(g, p, u);
      },
      f);
}

double RHSSpec::band_lo(double psi, double eps, int dim) {
  return std::max(psi - eps, 0.5 * std::pow(eps, dim));
}

double RHSSpec::band_hi(double psi, double eps, int dim) {
  return std::max(psi, std::pow(eps, dim));
}

double RHSSpec::regularize_value(double psi, double eps_pow) {
  if (psi >= eps_pow) return psi;
  return 0.5 * eps_pow + 0.5 * psi * psi / eps_pow;
}

RHSSpec RHSSpec::band_regularized(const RHSSpec& inner, double eps, int dim) {
  if (eps <= 0.0) fail(errc::invalid_input, "rhs: regularization needs eps > 0");
  const double eps_pow = std::pow(eps, dim);
  RHSFlags f = inner.flags();
  f.degenerate = false;  // bounded below by eps^dim / 2
  RHSSpec in = inner;
  return RHSSpec(
      [in, eps_pow](const grid::Grid& g, std::size_t p, double u) {
        return regularize_value(in.psi(g, p, u), eps_pow);
      },
      [in, eps_pow](const grid::Grid& g, std::size_t p, double u) {
        const double psi = in.psi(g, p, u);
        const double slope = psi >= eps_pow ? 1.0 : psi / eps_pow;
        return slope * in.psi_u(g, p, u);
      },
      f);
}

}  // namespace cma::ma
