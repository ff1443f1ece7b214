#include "cma/coords.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace cma::geom {

FrameNormalization normalize_frame(const ChartJet& jet) {
  validate(jet);
  Eigen::LLT<Eigen::MatrixXcd> llt(jet.g);
  if (llt.info() != Eigen::Success)
    fail(errc::degenerate_metric, "normalize_frame: Cholesky failed");
  // g = A A^H; C = A^{-T} gives C^T g conj(C) = I.
  Eigen::MatrixXcd A = llt.matrixL();
  Eigen::MatrixXcd C = A.transpose()
                           .triangularView<Eigen::Upper>()
                           .solve(Eigen::MatrixXcd::Identity(jet.n, jet.n));
  FrameNormalization out;
  out.change = C;
  out.jet = pullback_linear(jet, C);
  return out;
}

ChartJet pullback_linear(const ChartJet& jet, const Eigen::MatrixXcd& C) {
  validate(jet);
  const int n = jet.n;
  if (C.rows() != n || C.cols() != n) fail(errc::invalid_input, "pullback_linear: shape");
  ChartJet out;
  out.n = n;
  out.g = C.transpose() * jet.g * C.conjugate();
  out.dg.assign(n, Eigen::MatrixXcd::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (int p = 0; p < n; ++p) acc += C(p, k) * jet.dg[p];
    out.dg[k] = C.transpose() * acc * C.conjugate();
  }
  out.has_mixed2 = jet.has_mixed2;
  if (jet.has_mixed2) {
    out.ddm = Tensor4(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            cd s(0.0);
            for (int r = 0; r < n; ++r)
              for (int ss = 0; ss < n; ++ss)
                for (int p = 0; p < n; ++p)
                  for (int q = 0; q < n; ++q)
                    s += C(r, i) * std::conj(C(ss, j)) * C(p, k) * std::conj(C(q, l)) *
                         jet.ddm(r, ss, p, q);
            out.ddm(i, j, k, l) = s;
          }
  }
  out.has_holo2 = jet.has_holo2;
  if (jet.has_holo2) {
    out.ddh = Tensor4(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            cd s(0.0);
            for (int r = 0; r < n; ++r)
              for (int ss = 0; ss < n; ++ss)
                for (int p = 0; p < n; ++p)
                  for (int q = 0; q < n; ++q)
                    s += C(r, i) * std::conj(C(ss, j)) * C(p, k) * C(q, l) * jet.ddh(r, ss, p, q);
            out.ddh(i, j, k, l) = s;
          }
  }
  return out;
}

ChartJet pullback_jet(const ChartJet& jet, const QuadraticChange& change) {
  validate(jet);
  const int n = jet.n;
  if (change.n != n) fail(errc::invalid_input, "pullback_jet: dimension mismatch");
  // z_r(w) = w_r - q_r(w, w) + O(w^3), so at the base point the Jacobian is
  // the identity and d^2 z_r / dw_i dw_k = -2 q(r, i, k).
  ChartJet out;
  out.n = n;
  out.g = jet.g;
  out.dg.assign(n, Eigen::MatrixXcd::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cd s = jet.dg[k](i, j);
        for (int r = 0; r < n; ++r) s -= 2.0 * jet.g(r, j) * change.q(r, i, k);
        out.dg[k](i, j) = s;
      }
  out.has_mixed2 = false;  // second partials of the composed metric are not formed
  out.has_holo2 = false;
  return out;
}

QuadraticChange special_coordinates(const ChartJet& jet, CoordVariant variant) {
  validate(jet);
  const int n = jet.n;
  if ((jet.g - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12)
    fail(errc::precondition, "special_coordinates: base-point metric must be the identity");
  QuadraticChange c = QuadraticChange::identity(n);
  for (int r = 0; r < n; ++r)
    for (int m = 0; m < n; ++m) {
      const cd coeff = (variant == CoordVariant::primary)
                           ? 0.5 * jet.dg[m](r, r)   // w_r += g_{r r~, m} z_m z_r
                           : 0.5 * jet.dg[r](m, r);  // w_r += g_{m r~, r} z_m z_r
      c.q(r, m, r) += coeff;
      if (m != r) c.q(r, r, m) += coeff;
    }
  return c;
}

}  // namespace cma::geom
