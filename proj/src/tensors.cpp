#include "cma/tensors.hpp"

#include <cmath>

namespace cma::geom {

namespace {

// d g^{-1} / d z_k  = -Ginv (d g / d z_k) Ginv, with (dg/dz_k)(a,b) = dg[k](a,b).
// d g^{-1} / d z~_k = -Ginv (dg[k])^H Ginv.
Eigen::MatrixXcd dginv_holo(const ChartJet& jet, const Eigen::MatrixXcd& ginv, int k) {
  return -ginv * jet.dg[k] * ginv;
}
Eigen::MatrixXcd dginv_anti(const ChartJet& jet, const Eigen::MatrixXcd& ginv, int k) {
  return -ginv * jet.dg[k].adjoint() * ginv;
}

}  // namespace

Tensor3 christoffel(const ChartJet& jet) {
  validate(jet);
  const int n = jet.n;
  const Eigen::MatrixXcd ginv = inverse_metric(jet.g);
  Tensor3 G(n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        cd s(0.0);
        for (int m = 0; m < n; ++m) s += ginv(m, l) * jet.dg[j](k, m);
        G(l, j, k) = s;
      }
  return G;
}

Tensor3 torsion(const ChartJet& jet) {
  validate(jet);
  const int n = jet.n;
  const Eigen::MatrixXcd ginv = inverse_metric(jet.g);
  Tensor3 T(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cd s(0.0);
        for (int l = 0; l < n; ++l) s += ginv(l, k) * (jet.dg[i](j, l) - jet.dg[j](i, l));
        T(k, i, j) = s;
      }
  return T;
}

Tensor4 curvature(const ChartJet& jet) {
  validate(jet);
  if (!jet.has_mixed2) fail(errc::precondition, "curvature: jet lacks mixed second partials");
  const int n = jet.n;
  const Eigen::MatrixXcd ginv = inverse_metric(jet.g);
  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cd s = -jet.ddm(k, l, i, j);
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
              s += ginv(q, p) * jet.dg[i](k, q) * std::conj(jet.dg[j](l, p));
          R(i, j, k, l) = s;
        }
  return R;
}

RicciTraces ricci_traces(const ChartJet& jet) {
  const int n = jet.n;
  const Tensor4 R = curvature(jet);
  const Eigen::MatrixXcd ginv = inverse_metric(jet.g);
  RicciTraces out;
  out.first = Eigen::MatrixXcd::Zero(n, n);
  out.second = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cd r1(0.0), r2(0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          r1 += ginv(j, i) * R(i, j, a, b);
          r2 += ginv(j, i) * R(a, b, i, j);
        }
      out.first(a, b) = r1;
      out.second(a, b) = r2;
    }
  return out;
}

Tensor4 bianchi_defect(const ChartJet& jet) {
  const int n = jet.n;
  const Tensor4 R = curvature(jet);
  const Eigen::MatrixXcd ginv = inverse_metric(jet.g);

  std::vector<Eigen::MatrixXcd> dga(n);  // d g^{-1} / d z~_j
  for (int j = 0; j < n; ++j) dga[j] = dginv_anti(jet, ginv, j);

  Tensor4 D(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          // d T^m_{ki} / d z~_j, then lower with g_{m l~}.
          cd tors(0.0);
          for (int m = 0; m < n; ++m) {
            cd dT(0.0);
            for (int q = 0; q < n; ++q) {
              dT += dga[j](q, m) * (jet.dg[k](i, q) - jet.dg[i](k, q));
              dT += ginv(q, m) * (jet.ddm(i, q, k, j) - jet.ddm(k, q, i, j));
            }
            tors += jet.g(m, l) * dT;
          }
          D(i, j, k, l) = R(i, j, k, l) - R(k, j, i, l) - tors;
        }
  return D;
}

ScalarJet3 ScalarJet3::from_poly(const Poly& v, const std::vector<cd>& z) {
  ScalarJet3 out;
  const int n = v.n_complex();
  out.n = n;
  const int m = 2 * n;
  out.p1.assign(m, cd(0.0));
  out.p2.assign(std::size_t(m) * m, cd(0.0));
  out.p3.assign(std::size_t(m) * m * m, cd(0.0));
  for (int a = 0; a < m; ++a) {
    Poly da = v.d(a);
    out.p1[a] = da.eval(z);
    for (int b = a; b < m; ++b) {
      Poly dab = da.d(b);
      cd vab = dab.eval(z);
      out.p2[std::size_t(a) * m + b] = vab;
      out.p2[std::size_t(b) * m + a] = vab;
      for (int c = b; c < m; ++c) {
        cd vabc = dab.d(c).eval(z);
        int idx[3] = {a, b, c};
        int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (auto& p : perm)
          out.p3[(std::size_t(idx[p[0]]) * m + idx[p[1]]) * m + idx[p[2]]] = vabc;
      }
    }
  }
  return out;
}

double CommutationDefects::max() const {
  double m = 0.0;
  for (const auto& [k, d] : by_name) m = std::max(m, d);
  return m;
}

CommutationDefects commutation_defects(const ChartJet& jet, const ScalarJet3& v) {
  validate(jet);
  if (!jet.has_mixed2) fail(errc::precondition, "commutation: jet lacks mixed second partials");
  if (v.n != jet.n) fail(errc::invalid_input, "commutation: dimension mismatch");
  const int n = jet.n;
  const Eigen::MatrixXcd ginv = inverse_metric(jet.g);
  const Tensor3 Gam = christoffel(jet);
  const Tensor3 T = torsion(jet);

  std::vector<Eigen::MatrixXcd> dga(n), dgh(n);
  for (int j = 0; j < n; ++j) {
    dga[j] = dginv_anti(jet, ginv, j);
    dgh[j] = dginv_holo(jet, ginv, j);
  }

  // dGbar(l, k, i; j) = d Gamma^l_{ki} / d z~_j  (mixed partials only)
  auto dGbar = [&](int l, int k, int i, int j) {
    cd s(0.0);
    for (int m = 0; m < n; ++m)
      s += dga[j](m, l) * jet.dg[k](i, m) + ginv(m, l) * jet.ddm(i, m, k, j);
    return s;
  };
  // dGhol(l, j, i; k) = d Gamma^l_{ji} / d z_k  (needs holomorphic partials)
  auto dGhol = [&](int l, int j, int i, int k) {
    cd s(0.0);
    for (int m = 0; m < n; ++m)
      s += dgh[k](m, l) * jet.dg[j](i, m) + ginv(m, l) * jet.ddh(i, m, j, k);
    return s;
  };
  // l-component of R(d_j, d_k) d_i  (purely holomorphic curvature slot)
  auto Rcomp = [&](int l, int j, int k, int i) {
    cd s = dGhol(l, k, i, j) - dGhol(l, j, i, k);
    for (int p = 0; p < n; ++p)
      s += Gam(p, k, i) * Gam(l, j, p) - Gam(p, j, i) * Gam(l, k, p);
    return s;
  };

  // Covariant derivatives of v at the point (hol/antihol scalar indices).
  auto v1 = [&](int i) { return v.d1(i); };
  auto v1b = [&](int i) { return v.d1(n + i); };
  auto vhh = [&](int i, int j) {  // v_{ij} = D_j D_i v
    cd s = v.d2(j, i);
    for (int l = 0; l < n; ++l) s -= Gam(l, j, i) * v1(l);
    return s;
  };
  auto vhb = [&](int i, int j) { return v.d2(i, n + j); };  // v_{i j~}

  CommutationDefects out;
  auto record = [&](const std::string& key, double d) {
    auto& slot = out.by_name[key];
    slot = std::max(slot, d);
  };
  out.by_name["mixed_order_swap"] = 0.0;
  out.by_name["second_torsion"] = 0.0;
  out.by_name["third_conj_torsion"] = 0.0;
  out.by_name["third_mixed_curvature"] = 0.0;
  out.by_name["third_commute_front"] = 0.0;
  if (jet.has_holo2) {
    out.by_name["third_holo_curvature"] = 0.0;
    out.by_name["third_holo_front"] = 0.0;
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // v_{i j~} - v_{j~ i} = 0
      record("mixed_order_swap", std::abs(v.d2(i, n + j) - v.d2(n + j, i)));
      // v_{ij} - v_{ji} = T^l_{ij} v_l
      cd rhs(0.0);
      for (int l = 0; l < n; ++l) rhs += T(l, i, j) * v1(l);
      record("second_torsion", std::abs(vhh(i, j) - vhh(j, i) - rhs));
    }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        // v_{i j~ k~} - v_{i k~ j~} = conj(T^l_{jk}) v_{i l~}
        {
          cd lhs(0.0);
          for (int l = 0; l < n; ++l)
            lhs += (std::conj(Gam(l, j, k)) - std::conj(Gam(l, k, j))) * vhb(i, l);
          // v_{i j~ k~} = d_k~ d_j~ d_i v - conj(Gamma^l_{kj}) v_{i l~}; the
          // third partial cancels in the difference, leaving the line above.
          cd rhs3(0.0);
          for (int l = 0; l < n; ++l) rhs3 += std::conj(T(l, j, k)) * vhb(i, l);
          record("third_conj_torsion", std::abs(lhs - rhs3));
        }
        // v_{i j~ k} - v_{i k j~} = -g^{l m~} R_{k j~ i m~} v_l
        {
          cd vijk = v.d3(k, n + j, i);
          for (int l = 0; l < n; ++l) vijk -= Gam(l, k, i) * v.d2(l, n + j);
          cd vikj = v.d3(n + j, k, i);
          for (int l = 0; l < n; ++l)
            vikj -= dGbar(l, k, i, j) * v1(l) + Gam(l, k, i) * v.d2(n + j, l);
          cd rhs3(0.0);
          for (int l = 0; l < n; ++l) rhs3 += dGbar(l, k, i, j) * v1(l);
          record("third_mixed_curvature", std::abs(vijk - vikj - rhs3));
        }
        // v_{i j~ k} - v_{k i j~} = -g^{l m~} R_{i j~ k m~} v_l + T^l_{ik} v_{l j~}
        {
          cd vijk = v.d3(k, n + j, i);
          for (int l = 0; l < n; ++l) vijk -= Gam(l, k, i) * v.d2(l, n + j);
          cd vkij = v.d3(n + j, i, k);
          for (int l = 0; l < n; ++l)
            vkij -= dGbar(l, i, k, j) * v1(l) + Gam(l, i, k) * v.d2(n + j, l);
          cd rhs3(0.0);
          for (int l = 0; l < n; ++l)
            rhs3 += dGbar(l, i, k, j) * v1(l) + T(l, i, k) * vhb(l, j);
          record("third_commute_front", std::abs(vijk - vkij - rhs3));
        }
        if (!jet.has_holo2) continue;
        // v_{ijk}: D_k D_j D_i v expanded in partials
        auto viii = [&](int a, int b, int c) {  // v_{a b c} = D_c D_b D_a
          cd s = v.d3(c, b, a);
          for (int l = 0; l < n; ++l) {
            s -= dGhol(l, b, a, c) * v1(l) + Gam(l, b, a) * v.d2(c, l);
            s -= Gam(l, c, a) * vhh(l, b) + Gam(l, c, b) * vhh(a, l);
          }
          return s;
        };
        // v_{ijk} - v_{ikj} = g^{l m~} R_{jk i m~} v_l + T^l_{jk} v_{il}
        {
          cd rhs3(0.0);
          for (int l = 0; l < n; ++l)
            rhs3 += Rcomp(l, j, k, i) * v1(l) + T(l, j, k) * vhh(i, l);
          record("third_holo_curvature", std::abs(viii(i, j, k) - viii(i, k, j) - rhs3));
        }
        // v_{ijk} - v_{kij} = g^{l m~} R_{jk i m~} v_l + T^l_{jk} v_{il}
        //                     + T^l_{ik} v_{lj} + (nabla_j T^l_{ik}) v_l
        {
          cd rhs3(0.0);
          for (int l = 0; l < n; ++l) {
            cd covT = dGhol(l, i, k, j) - dGhol(l, k, i, j);
            for (int p = 0; p < n; ++p)
              covT += Gam(l, j, p) * T(p, i, k) - Gam(p, j, i) * T(l, p, k) -
                      Gam(p, j, k) * T(l, i, p);
            rhs3 += Rcomp(l, j, k, i) * v1(l) + T(l, j, k) * vhh(i, l) +
                    T(l, i, k) * vhh(l, j) + covT * v1(l);
          }
          record("third_holo_front", std::abs(viii(i, j, k) - viii(k, i, j) - rhs3));
        }
      }

  return out;
}

}  // namespace cma::geom
