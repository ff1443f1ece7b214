#pragma once

// Coordinate changes acting on chart jets: the linear frame normalization
// that brings g(p) to the identity, and the degree-2 changes that kill
// selected first partials of the metric at the base point.

#include "cma/tensors.hpp"

namespace cma::geom {

// w_r(z) = z_r + sum_{m,l} q(r,m,l) z_m z_l with q symmetric in (m,l); the
// linear part is the identity by construction.
struct QuadraticChange {
  int n = 0;
  Tensor3 q;

  static QuadraticChange identity(int n) {
    QuadraticChange c;
    c.n = n;
    c.q = Tensor3(n);
    return c;
  }
  double quadratic_norm() const { return q.max_abs(); }
};

enum class CoordVariant { primary, alternate };

struct FrameNormalization {
  Eigen::MatrixXcd change;  // columns express d/dw_i = change(r,i) d/dz_r
  ChartJet jet;             // pulled-back jet with g = identity
};

// Cholesky-based linear change making g(p) the identity.
FrameNormalization normalize_frame(const ChartJet& jet);

// Pullback through a pure linear change C: g~ = C^T g conj(C), with all
// stored partials transformed exactly.
ChartJet pullback_linear(const ChartJet& jet, const Eigen::MatrixXcd& change);

// Exact chain-rule pullback of g and dg through a quadratic change at the
// base point. Second partials of the result are not computed and the output
// jet is marked accordingly.
ChartJet pullback_jet(const ChartJet& jet, const QuadraticChange& change);

// Degree-2 change of Lemma-2.1 type. Requires g(p) = identity (apply
// normalize_frame first). primary kills d g~_{i i~}/d w_k for all i, k and
// leaves d g~_{i j~}/d w_j = T^j_{ji} for i != j; alternate kills
// d g~_{i j~}/d w_j for all i, j and leaves d g~_{i i~}/d w_k = T^i_{ki}.
QuadraticChange special_coordinates(const ChartJet& jet, CoordVariant variant);

}  // namespace cma::geom
