#pragma once

// Closed-form determinant / inverse / smallest-eigenvalue helpers for the
// per-point Hermitian matrices (n <= 2 hot paths; Eigen fallback above).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "cma/core.hpp"

namespace cma::herm {

inline double det(const cd* H, int nc) {
  switch (nc) {
    case 1:
      return H[0].real();
    case 2:
      return H[0].real() * H[3].real() - std::norm(H[1]);
    default: {
      Eigen::MatrixXcd m(nc, nc);
      for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) m(i, j) = H[i * nc + j];
      return m.determinant().real();
    }
  }
}

inline double lambda_min(const cd* H, int nc) {
  switch (nc) {
    case 1:
      return H[0].real();
    case 2: {
      const double a = H[0].real(), c = H[3].real();
      const double mid = 0.5 * (a + c);
      const double rad = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(H[1]));
      return mid - rad;
    }
    default: {
      Eigen::MatrixXcd m(nc, nc);
      for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) m(i, j) = H[i * nc + j];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
      return es.eigenvalues().minCoeff();
    }
  }
}

// inverse of a Hermitian positive definite matrix; out is nc x nc row-major
inline void inverse(const cd* H, int nc, cd* out) {
  switch (nc) {
    case 1:
      out[0] = cd(1.0 / H[0].real(), 0.0);
      return;
    case 2: {
      const double d = det(H, 2);
      out[0] = cd(H[3].real() / d, 0.0);
      out[3] = cd(H[0].real() / d, 0.0);
      out[1] = -H[1] / d;
      out[2] = std::conj(out[1]);
      return;
    }
    default: {
      Eigen::MatrixXcd m(nc, nc);
      for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) m(i, j) = H[i * nc + j];
      Eigen::MatrixXcd inv = m.inverse();
      for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) out[i * nc + j] = inv(i, j);
      return;
    }
  }
}

// Smallest eigenvalue of M relative to the Hermitian PD metric G (standard
// problem when G is the identity).
inline double lambda_min_rel(const cd* M, const cd* G, int nc, bool g_identity) {
  if (g_identity) return lambda_min(M, nc);
  Eigen::MatrixXcd m(nc, nc), g(nc, nc);
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) {
      m(i, j) = M[i * nc + j];
      g(i, j) = G[i * nc + j];
    }
  Eigen::LLT<Eigen::MatrixXcd> llt(g);
  Eigen::MatrixXcd L = llt.matrixL();
  Eigen::MatrixXcd B = L.triangularView<Eigen::Lower>().solve(m);
  B = L.triangularView<Eigen::Lower>().solve(B.adjoint()).adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace cma::herm
