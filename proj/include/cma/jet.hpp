#pragma once

// Pointwise Hermitian metric jets: the metric components g_{i j~} together
// with their first and second coordinate partials at one point. All tensor
// formulas of the geometry kernel consume these exact-value records; nothing
// here is discretized.
//
// Index conventions (j~ marks a conjugate index):
//   g(i,j)        = g_{i j~}
//   dg[k](i,j)    = d g_{i j~} / d z_k          (the conjugate derivative is
//                                                implied by hermiticity and
//                                                never stored)
//   ddm(i,j,k,l)  = d^2 g_{i j~} / d z_k d z~_l  (mixed second partials)
//   ddh(i,j,k,l)  = d^2 g_{i j~} / d z_k d z_l   (holomorphic second partials;
//                                                optional, needed only by the
//                                                purely holomorphic
//                                                commutation identities)

#include <Eigen/Dense>
#include <vector>

#include "cma/core.hpp"

namespace cma::geom {

struct Tensor3 {
  int n = 0;
  std::vector<cd> v;
  Tensor3() = default;
  explicit Tensor3(int dim) : n(dim), v(std::size_t(dim) * dim * dim, cd(0.0)) {}
  cd& operator()(int a, int b, int c) { return v[std::size_t((a * n + b) * n + c)]; }
  cd operator()(int a, int b, int c) const { return v[std::size_t((a * n + b) * n + c)]; }
  double max_abs() const;
};

struct Tensor4 {
  int n = 0;
  std::vector<cd> v;
  Tensor4() = default;
  explicit Tensor4(int dim) : n(dim), v(std::size_t(dim) * dim * dim * dim, cd(0.0)) {}
  cd& operator()(int a, int b, int c, int d) {
    return v[std::size_t(((a * n + b) * n + c) * n + d)];
  }
  cd operator()(int a, int b, int c, int d) const {
    return v[std::size_t(((a * n + b) * n + c) * n + d)];
  }
  double max_abs() const;
};

struct ChartJet {
  int n = 0;
  Eigen::MatrixXcd g;
  std::vector<Eigen::MatrixXcd> dg;  // dg[k](i,j)
  bool has_mixed2 = false;
  Tensor4 ddm;  // ddm(i,j,k,l), Hermitian pairing ddm(i,j,k,l) = conj(ddm(j,i,l,k))
  bool has_holo2 = false;
  Tensor4 ddh;  // ddh(i,j,k,l), symmetric in (k,l)

  static ChartJet flat(int n);
};

// Throws errc::invalid_input when hermiticity, positivity or the stored
// derivative symmetries are violated beyond tol.
void validate(const ChartJet& jet, double tol = 1e-12);

// Pivoted inverse with a condition-number guard (1e12); beyond the guard the
// metric is treated as degenerate.
Eigen::MatrixXcd inverse_metric(const Eigen::MatrixXcd& g);

double smallest_eigenvalue(const Eigen::MatrixXcd& hermitian);

}  // namespace cma::geom
