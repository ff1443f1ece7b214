#pragma once

// Chern-connection tensor algebra at a point. Index placement follows the
// usual component conventions: for a Hermitian matrix M(i,j) = M_{i j~}, the
// raised symbol M^{a b~} equals conj(Minv(a,b)), so contractions of the form
// g^{i j~} X_{i j~} reduce to trace(Minv * X).

#include <map>
#include <string>

#include "cma/jet.hpp"
#include "cma/poly.hpp"

namespace cma::geom {

// Gamma^l_{jk} = g^{l m~} d g_{k m~} / d z_j, stored as (l, j, k).
Tensor3 christoffel(const ChartJet& jet);

// T^k_{ij} = g^{k l~} (g_{j l~, i} - g_{i l~, j}), stored as (k, i, j).
Tensor3 torsion(const ChartJet& jet);

// R_{i j~ k l~} = -g_{k l~, i j~} + g^{p q~} g_{k q~, i} g_{p l~, j~},
// stored as (i, j, k, l). Requires mixed second partials.
Tensor4 curvature(const ChartJet& jet);

struct RicciTraces {
  Eigen::MatrixXcd first;   // R_{k l~} = g^{i j~} R_{i j~ k l~}
  Eigen::MatrixXcd second;  // S_{i j~} = g^{k l~} R_{i j~ k l~}
};
RicciTraces ricci_traces(const ChartJet& jet);

// R_{i j~ k l~} - R_{k j~ i l~} - g_{m l~} \nabla_{j~} T^m_{ki}. Identically
// zero for any metric; the returned tensor is the roundoff defect.
Tensor4 bianchi_defect(const ChartJet& jet);

// Exact partials of a scalar test function at the base point, flat axis
// convention: a < n means d/dz_a, otherwise d/d conj(z_{a-n}).
struct ScalarJet3 {
  int n = 0;
  std::vector<cd> p1;  // (2n)
  std::vector<cd> p2;  // (2n)^2, symmetric
  std::vector<cd> p3;  // (2n)^3, symmetric

  cd d1(int a) const { return p1[a]; }
  cd d2(int a, int b) const { return p2[std::size_t(a) * 2 * n + b]; }
  cd d3(int a, int b, int c) const { return p3[(std::size_t(a) * 2 * n + b) * 2 * n + c]; }

  static ScalarJet3 from_poly(const Poly& v, const std::vector<cd>& z);
};

// Defects of the covariant-derivative commutation identities (second and
// third order). Entries ending in "_holo" need holomorphic second partials of
// the metric and are omitted when the jet lacks them.
struct CommutationDefects {
  std::map<std::string, double> by_name;
  double max() const;
};
CommutationDefects commutation_defects(const ChartJet& jet, const ScalarJet3& v);

}  // namespace cma::geom
