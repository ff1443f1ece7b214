#include "cma/stencil.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace cma::grid {

double d2_axis(const ScalarField& u, std::size_t p, const int* mi, int a) {
  const Grid& g = u.grid();
  const double h = g.axis(a).h();
  const double up = u[g.neighbor(p, mi, a, 1)];
  const double um = u[g.neighbor(p, mi, a, -1)];
  return (up - 2.0 * u[p] + um) / (h * h);
}

double d1_axis(const ScalarField& u, std::size_t p, const int* mi, int a) {
  const Grid& g = u.grid();
  const double h = g.axis(a).h();
  return (u[g.neighbor(p, mi, a, 1)] - u[g.neighbor(p, mi, a, -1)]) / (2.0 * h);
}

double cross_axes(const ScalarField& u, std::size_t p, const int* mi, int a, int b) {
  const Grid& g = u.grid();
  const double ha = g.axis(a).h(), hb = g.axis(b).h();
  const std::size_t pa = g.neighbor(p, mi, a, 1), ma = g.neighbor(p, mi, a, -1);
  const double upp = u[g.neighbor(pa, mi, b, 1)];
  const double upm = u[g.neighbor(pa, mi, b, -1)];
  const double ump = u[g.neighbor(ma, mi, b, 1)];
  const double umm = u[g.neighbor(ma, mi, b, -1)];
  return (upp - upm - ump + umm) / (4.0 * ha * hb);
}

double d1_general(const ScalarField& u, std::size_t p, const int* mi, int a) {
  const Grid& g = u.grid();
  const Axis& ax = g.axis(a);
  const double h = ax.h();
  if (ax.periodic || (mi[a] > 0 && mi[a] < ax.res - 1)) return d1_axis(u, p, mi, a);
  const int s = mi[a] == 0 ? 1 : -1;
  const double u0 = u[p];
  const double u1 = u[g.neighbor(p, mi, a, s)];
  const double u2 = u[g.neighbor(p, mi, a, 2 * s)];
  return s * (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * h);
}

double d2_general(const ScalarField& u, std::size_t p, const int* mi, int a) {
  const Grid& g = u.grid();
  const Axis& ax = g.axis(a);
  const double h = ax.h();
  if (ax.periodic || (mi[a] > 0 && mi[a] < ax.res - 1)) return d2_axis(u, p, mi, a);
  const int s = mi[a] == 0 ? 1 : -1;
  const double u0 = u[p];
  const double u1 = u[g.neighbor(p, mi, a, s)];
  const double u2 = u[g.neighbor(p, mi, a, 2 * s)];
  const double u3 = u[g.neighbor(p, mi, a, 3 * s)];
  return (2.0 * u0 - 5.0 * u1 + 4.0 * u2 - u3) / (h * h);
}

double cross_general(const ScalarField& u, const int* mi, int a, int b) {
  // Compose general first differences: apply d1 along b on the three points
  // of the (possibly one-sided) d1 stencil along a.
  const Grid& g = u.grid();
  const Axis& ax = g.axis(a);
  const double h = ax.h();
  int m[12];
  for (int c = 0; c < g.naxes(); ++c) m[c] = mi[c];
  auto d1b_at = [&](int ia) {
    m[a] = ia;
    const std::size_t q = g.encode(m);
    return d1_general(u, q, m, b);
  };
  if (ax.periodic || (mi[a] > 0 && mi[a] < ax.res - 1)) {
    const int lo = mi[a] - 1, hi = mi[a] + 1;
    const int loi = ax.periodic ? (lo + ax.res) % ax.res : lo;
    const int hii = ax.periodic ? hi % ax.res : hi;
    return (d1b_at(hii) - d1b_at(loi)) / (2.0 * h);
  }
  const int s = mi[a] == 0 ? 1 : -1;
  const double f0 = d1b_at(mi[a]);
  const double f1 = d1b_at(mi[a] + s);
  const double f2 = d1b_at(mi[a] + 2 * s);
  return s * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

void hessian_at(const ScalarField& u, std::size_t p, const int* mi, cd* H) {
  const Grid& g = u.grid();
  const int nc = g.ncomplex();
  for (int a = 0; a < nc; ++a) {
    const int xa = g.x_axis(a), ya = g.y_axis(a);
    double diag = d2_axis(u, p, mi, xa);
    if (ya >= 0) diag += d2_axis(u, p, mi, ya);
    H[a * nc + a] = cd(0.25 * diag, 0.0);
    for (int b = a + 1; b < nc; ++b) {
      const int xb = g.x_axis(b), yb = g.y_axis(b);
      double re = cross_axes(u, p, mi, xa, xb);
      double im = 0.0;
      if (ya >= 0 && yb >= 0) re += cross_axes(u, p, mi, ya, yb);
      if (yb >= 0) im += cross_axes(u, p, mi, xa, yb);
      if (ya >= 0) im -= cross_axes(u, p, mi, ya, xb);
      H[a * nc + b] = 0.25 * cd(re, im);
      H[b * nc + a] = std::conj(H[a * nc + b]);
    }
  }
}

void gradient_at(const ScalarField& u, std::size_t p, const int* mi, cd* grad) {
  const Grid& g = u.grid();
  const int nc = g.ncomplex();
  for (int a = 0; a < nc; ++a) {
    const double dx = d1_axis(u, p, mi, g.x_axis(a));
    const double dy = g.y_axis(a) >= 0 ? d1_axis(u, p, mi, g.y_axis(a)) : 0.0;
    grad[a] = 0.5 * cd(dx, -dy);
  }
}

void gradient_general(const ScalarField& u, std::size_t p, const int* mi, cd* grad) {
  const Grid& g = u.grid();
  const int nc = g.ncomplex();
  for (int a = 0; a < nc; ++a) {
    const double dx = d1_general(u, p, mi, g.x_axis(a));
    const double dy = g.y_axis(a) >= 0 ? d1_general(u, p, mi, g.y_axis(a)) : 0.0;
    grad[a] = 0.5 * cd(dx, -dy);
  }
}

Form11Field complex_hessian(const ScalarField& u) {
  const Grid& g = u.grid();
  const int nc = g.ncomplex();
  Form11Field out = Form11Field::varying(g, nc);
  par::parallel_for(g.count(), [&](std::size_t lo, std::size_t hi) {
    Walker w(g);
    w.seek(lo);
    for (std::size_t p = lo; p < hi; ++p, w.advance()) {
      if (g.is_interior(w.mi())) hessian_at(u, p, w.mi(), out.raw(p));
    }
  });
  return out;
}

double gradient_sup(const ScalarField& u, const Form11Field& gm) {
  const Grid& g = u.grid();
  if (!g.same_layout(gm.grid())) fail(errc::invalid_input, "gradient_sup: grid mismatch");
  const int nc = g.ncomplex();
  Eigen::MatrixXcd ginv_const;
  if (gm.is_constant()) ginv_const = gm.constant_value().inverse();
  double sup2 = par::reduce_max(g.count(), [&](std::size_t lo, std::size_t hi) {
    Walker w(g);
    w.seek(lo);
    std::vector<cd> grad(nc);
    double m = 0.0;
    for (std::size_t p = lo; p < hi; ++p, w.advance()) {
      if (!g.is_interior(w.mi())) continue;
      gradient_at(u, p, w.mi(), grad.data());
      Eigen::MatrixXcd ginv = gm.is_constant() ? ginv_const : gm.at(p).inverse();
      double val = 0.0;
      for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b) val += (ginv(b, a) * grad[a] * std::conj(grad[b])).real();
      m = std::max(m, val);
    }
    return m;
  });
  return std::sqrt(std::max(0.0, sup2));
}

ScalarField chern_laplacian(const ScalarField& u, const Form11Field& gm) {
  const Grid& g = u.grid();
  if (!g.same_layout(gm.grid())) fail(errc::invalid_input, "chern_laplacian: grid mismatch");
  const int nc = g.ncomplex();
  Eigen::MatrixXcd ginv_const;
  if (gm.is_constant()) ginv_const = gm.constant_value().inverse();
  ScalarField out(g);
  std::vector<double> residue((g.count() + par::kChunk - 1) / par::kChunk, 0.0);
  par::parallel_for(g.count(), [&](std::size_t lo, std::size_t hi) {
    Walker w(g);
    w.seek(lo);
    std::vector<cd> H(nc * nc);
    double worst = 0.0;
    for (std::size_t p = lo; p < hi; ++p, w.advance()) {
      if (!g.is_interior(w.mi())) continue;
      hessian_at(u, p, w.mi(), H.data());
      Eigen::MatrixXcd ginv = gm.is_constant() ? ginv_const : gm.at(p).inverse();
      cd s(0.0);
      for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b) s += ginv(b, a) * H[a * nc + b];
      worst = std::max(worst, std::abs(s.imag()) / (1.0 + std::abs(s.real())));
      out[p] = s.real();
    }
    residue[lo / par::kChunk] = worst;
  });
  for (double r : residue)
    if (r > 1e-12)
      fail(errc::internal, "chern_laplacian: imaginary residue above threshold");
  return out;
}

double integrate(const ScalarField& f, const Form11Field& vol) {
  const Grid& g = f.grid();
  if (g.kind() != GridKind::torus)
    fail(errc::unsupported, "integrate: closed-manifold quadrature needs a torus grid");
  if (!g.same_layout(vol.grid())) fail(errc::invalid_input, "integrate: grid mismatch");
  double det_const = 0.0;
  if (vol.is_constant()) det_const = vol.constant_value().determinant().real();
  const double cell = g.cell_volume();
  double s = par::reduce_sum(g.count(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t p = lo; p < hi; ++p) {
      const double d = vol.is_constant() ? det_const : vol.at(p).determinant().real();
      acc += f[p] * d;
    }
    return acc;
  });
  return s * cell;
}

}  // namespace cma::grid
