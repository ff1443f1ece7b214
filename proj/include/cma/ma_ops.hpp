#pragma once

// The discrete Monge-Ampere operator in determinant and log form, the
// admissibility sweep, and the linearized operator
//   v -> gg^{i j~} v_{i j~} - (psi_u / psi) v
// with matrix-free application and sparse assembly over interior unknowns.

#include <Eigen/Sparse>

#include "cma/problem.hpp"

namespace cma::ma {

// det(chi + Hess u) - psi(z, u) det g at interior points (0 elsewhere).
grid::ScalarField ma_residual(const grid::ScalarField& u, const MAProblem& prob);

// log det(chi + Hess u) - log(psi(z, u) det g); requires an admissible u and
// psi > 0 on the grid.
grid::ScalarField log_residual(const grid::ScalarField& u, const MAProblem& prob);

// (everywhere admissible?, grid-min generalized eigenvalue of g^{-1}(chi+Hu))
std::pair<bool, double> admissibility(const grid::ScalarField& u, const MAProblem& prob);

class LinearizedOp {
public:
  LinearizedOp() = default;

  const grid::Grid& gr() const { return grid_; }
  double lambda_min() const { return lambda_min_; }
  const Eigen::MatrixXcd& mean_gginv() const { return mean_gginv_; }
  double mean_c0() const { return mean_c0_; }

  // w = gg^{i j~} v_{i j~} - c0 v at interior points; w = 0 on the boundary
  // mask. v carries boundary entries (zero for Newton corrections).
  void apply(const std::vector<double>& v, std::vector<double>& w) const;

  // One row per interior point, Dirichlet couplings dropped.
  Eigen::SparseMatrix<double> assemble() const;
  const std::vector<std::int64_t>& interior_index() const { return interior_index_; }
  std::size_t interior_count() const { return ninterior_; }

  // Packed per-point coefficients (diagonal entries of the inverse metric
  // first, then upper-triangle re/im pairs) and the zeroth-order term.
  const double* packed(std::size_t p) const { return gginv_.data() + p * packsize_; }
  int packsize() const { return packsize_; }
  double c0_at(std::size_t p) const { return c0_[p]; }

  // Directional-derivative reference: L v should match
  // d/de [log det(chi_{u+ev}) - log psi(., u+ev)] at e = 0.
  friend LinearizedOp linearize(const grid::ScalarField& u, const MAProblem& prob);

private:
  grid::Grid grid_;
  const MAProblem* prob_ = nullptr;
  int nc_ = 0;
  int packsize_ = 0;
  std::vector<double> gginv_;  // packed Hermitian inverse of gg per point
  std::vector<double> c0_;
  std::vector<std::int64_t> interior_index_;
  std::size_t ninterior_ = 0;
  double lambda_min_ = 0.0;
  Eigen::MatrixXcd mean_gginv_;
  double mean_c0_ = 0.0;
};

LinearizedOp linearize(const grid::ScalarField& u, const MAProblem& prob);

// Pointwise Yau-type inequality in a normal frame: for eigenvalues lam of
// gg relative to g, (sum 1/lam)^{n-1} >= (sum lam) / prod(lam).
double yau_inequality_margin(const std::vector<double>& lam);

// log det((A+B)/2) - (log det A + log det B)/2 (nonnegative for PD inputs).
double log_concavity_margin(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

}  // namespace cma::ma
