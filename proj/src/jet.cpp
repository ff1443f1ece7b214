#include "cma/jet.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace cma::geom {

double Tensor3::max_abs() const {
  double m = 0.0;
  for (const cd& x : v) m = std::max(m, std::abs(x));
  return m;
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (const cd& x : v) m = std::max(m, std::abs(x));
  return m;
}

ChartJet ChartJet::flat(int n) {
  ChartJet j;
  j.n = n;
  j.g = Eigen::MatrixXcd::Identity(n, n);
  j.dg.assign(n, Eigen::MatrixXcd::Zero(n, n));
  j.has_mixed2 = true;
  j.ddm = Tensor4(n);
  j.has_holo2 = true;
  j.ddh = Tensor4(n);
  return j;
}

void validate(const ChartJet& jet, double tol) {
  const int n = jet.n;
  if (n <= 0 || jet.g.rows() != n || jet.g.cols() != n || int(jet.dg.size()) != n)
    fail(errc::invalid_input, "chart jet: inconsistent shapes");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(jet.g(i, j) - std::conj(jet.g(j, i))) > tol)
        fail(errc::invalid_input, "chart jet: metric not Hermitian");
  if (smallest_eigenvalue(jet.g) <= 0.0)
    fail(errc::invalid_input, "chart jet: metric not positive definite");
  if (jet.has_mixed2) {
    if (jet.ddm.n != n) fail(errc::invalid_input, "chart jet: bad mixed second partials");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            if (std::abs(jet.ddm(i, j, k, l) - std::conj(jet.ddm(j, i, l, k))) > tol)
              fail(errc::invalid_input, "chart jet: mixed partials violate Hermitian pairing");
  }
  if (jet.has_holo2) {
    if (jet.ddh.n != n) fail(errc::invalid_input, "chart jet: bad holomorphic second partials");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            if (std::abs(jet.ddh(i, j, k, l) - jet.ddh(i, j, l, k)) > tol)
              fail(errc::invalid_input, "chart jet: holomorphic partials not symmetric");
  }
}

Eigen::MatrixXcd inverse_metric(const Eigen::MatrixXcd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  const auto& ev = es.eigenvalues();
  double lo = ev.minCoeff(), hi = ev.maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12)
    fail(errc::degenerate_metric, "metric inversion: condition number beyond 1e12");
  return g.fullPivLu().inverse();
}

double smallest_eigenvalue(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace cma::geom
