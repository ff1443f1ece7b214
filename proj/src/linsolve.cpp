#include "cma/linsolve.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <fftw3.h>

namespace cma::solve {

namespace {

using grid::Grid;
using grid::GridKind;

double dot_interior(const ma::LinearizedOp& L, const std::vector<double>& a,
                    const std::vector<double>& b) {
  const auto& idx = L.interior_index();
  return par::reduce_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t p = lo; p < hi; ++p)
      if (idx[p] >= 0) s += a[p] * b[p];
    return s;
  });
}

void project_mean_interior(const ma::LinearizedOp& L, std::vector<double>& a) {
  const auto& idx = L.interior_index();
  double s = par::reduce_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t p = lo; p < hi; ++p)
      if (idx[p] >= 0) acc += a[p];
    return acc;
  });
  const double mean = s / double(L.interior_count());
  par::parallel_for(a.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p)
      if (idx[p] >= 0) a[p] -= mean;
  });
}

// Constant-coefficient symbol of the discrete operator for the mean inverse
// metric A and zeroth-order coefficient c0.
class SpectralPrecond {
public:
  SpectralPrecond(const ma::LinearizedOp& L, bool project_mean)
      : grid_(L.gr()), project_(project_mean) {
    const Grid& g = grid_;
    kind_ = g.kind();
    if (kind_ == GridKind::torus) {
      count_ = g.count();
      buf_ = fftw_alloc_complex(count_);
      int rank = g.naxes();
      std::vector<int> dims(rank);
      for (int a = 0; a < rank; ++a) dims[a] = g.axis(a).res;
      fwd_ = fftw_plan_dft(rank, dims.data(), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft(rank, dims.data(), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
      build_torus_symbol(L);
    } else if (kind_ == GridKind::box) {
      int rank = g.naxes();
      std::vector<int> dims(rank);
      count_ = 1;
      for (int a = 0; a < rank; ++a) {
        dims[a] = g.axis(a).res - 2;
        count_ *= std::size_t(dims[a]);
      }
      rbuf_ = fftw_alloc_real(count_);
      std::vector<fftw_r2r_kind> kinds(rank, FFTW_RODFT00);
      r2r_ = fftw_plan_r2r(rank, dims.data(), rbuf_, rbuf_, kinds.data(), FFTW_ESTIMATE);
      dst_scale_ = 1.0;
      for (int a = 0; a < rank; ++a) dst_scale_ *= 2.0 * (dims[a] + 1);
      build_box_symbol(L, dims);
    } else {
      build_jacobi(L);
    }
  }

  ~SpectralPrecond() {
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
    if (r2r_) fftw_destroy_plan(r2r_);
    if (buf_) fftw_free(buf_);
    if (rbuf_) fftw_free(rbuf_);
  }

  SpectralPrecond(const SpectralPrecond&) = delete;
  SpectralPrecond& operator=(const SpectralPrecond&) = delete;

  void apply(const ma::LinearizedOp& L, const std::vector<double>& r, std::vector<double>& z) {
    const Grid& g = grid_;
    if (kind_ == GridKind::torus) {
      for (std::size_t p = 0; p < count_; ++p) {
        buf_[p][0] = r[p];
        buf_[p][1] = 0.0;
      }
      fftw_execute(fwd_);
      for (std::size_t p = 0; p < count_; ++p) {
        const double s = sym_[p];
        if (s == 0.0) {
          buf_[p][0] = buf_[p][1] = 0.0;
        } else {
          buf_[p][0] /= s;
          buf_[p][1] /= s;
        }
      }
      fftw_execute(bwd_);
      z.assign(g.count(), 0.0);
      const double scale = 1.0 / double(count_);
      for (std::size_t p = 0; p < count_; ++p) z[p] = buf_[p][0] * scale;
      if (project_) project_mean_interior(L, z);
      return;
    }
    if (kind_ == GridKind::box) {
      const auto& idx = L.interior_index();
      for (std::size_t p = 0; p < g.count(); ++p)
        if (idx[p] >= 0) rbuf_[idx[p]] = r[p];
      fftw_execute(r2r_);
      for (std::size_t q = 0; q < count_; ++q) rbuf_[q] /= sym_[q];
      fftw_execute(r2r_);
      z.assign(g.count(), 0.0);
      for (std::size_t p = 0; p < g.count(); ++p)
        if (idx[p] >= 0) z[p] = rbuf_[idx[p]] / dst_scale_;
      return;
    }
    // Jacobi
    const auto& idx = L.interior_index();
    z.assign(g.count(), 0.0);
    par::parallel_for(g.count(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p)
        if (idx[p] >= 0) z[p] = r[p] / diag_[p];
    });
  }

private:
  void build_torus_symbol(const ma::LinearizedOp& L) {
    const Grid& g = grid_;
    const int nc = g.ncomplex();
    const Eigen::MatrixXcd A = L.mean_gginv();
    const double c0 = L.mean_c0();
    sym_.assign(count_, 0.0);
    const int na = g.naxes();
    std::vector<double> lam_axis(na), s_axis(na);
    grid::Walker w(g);
    for (std::size_t p = 0; p < count_; ++p, w.advance()) {
      const int* k = w.mi();
      for (int a = 0; a < na; ++a) {
        const double th = 2.0 * M_PI * k[a] / g.axis(a).res;
        const double h = g.axis(a).h();
        lam_axis[a] = -(2.0 - 2.0 * std::cos(th)) / (h * h);
        s_axis[a] = std::sin(th) / h;
      }
      double s = -c0;
      for (int a = 0; a < nc; ++a) {
        const int xa = g.x_axis(a), ya = g.y_axis(a);
        double d2 = lam_axis[xa];
        if (ya >= 0) d2 += lam_axis[ya];
        s += A(a, a).real() * 0.25 * d2;
      }
      for (int a = 0; a < nc; ++a)
        for (int b = a + 1; b < nc; ++b) {
          const double re = A(a, b).real(), im = -A(a, b).imag();
          const int xa = g.x_axis(a), ya = g.y_axis(a);
          const int xb = g.x_axis(b), yb = g.y_axis(b);
          double sum_re = -s_axis[xa] * s_axis[xb];
          double sum_im = 0.0;
          if (ya >= 0 && yb >= 0) sum_re -= s_axis[ya] * s_axis[yb];
          if (yb >= 0) sum_im -= s_axis[xa] * s_axis[yb];
          if (ya >= 0) sum_im += s_axis[ya] * s_axis[xb];
          s += 0.5 * (re * sum_re - im * sum_im);
        }
      sym_[p] = s;
    }
    if (project_) sym_[0] = 0.0;
    // guard: a vanishing symbol away from the zero mode would divide by zero
    for (std::size_t p = 1; p < count_; ++p)
      if (sym_[p] == 0.0) fail(errc::internal, "spectral preconditioner: singular symbol");
  }

  void build_box_symbol(const ma::LinearizedOp& L, const std::vector<int>& dims) {
    const Grid& g = grid_;
    const int nc = g.ncomplex();
    const Eigen::MatrixXcd A = L.mean_gginv();
    const double c0 = L.mean_c0();
    sym_.assign(count_, 0.0);
    const int na = g.naxes();
    std::vector<int> q(na, 0);
    for (std::size_t ord = 0; ord < count_; ++ord) {
      double s = -c0;
      for (int a = 0; a < nc; ++a) {
        const int xa = g.x_axis(a), ya = g.y_axis(a);
        auto lam = [&](int ax) {
          const double h = g.axis(ax).h();
          const double th = M_PI * (q[ax] + 1) / double(g.axis(ax).res - 1);
          return -(2.0 - 2.0 * std::cos(th)) / (h * h);
        };
        double d2 = lam(xa);
        if (ya >= 0) d2 += lam(ya);
        s += A(a, a).real() * 0.25 * d2;
      }
      sym_[ord] = s;
      for (int a = na - 1; a >= 0; --a) {
        if (++q[a] < dims[a]) break;
        q[a] = 0;
      }
    }
  }

  void build_jacobi(const ma::LinearizedOp& L) {
    const Grid& g = grid_;
    const int nc = g.ncomplex();
    diag_.assign(g.count(), 1.0);
    const auto& idx = L.interior_index();
    par::parallel_for(g.count(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p) {
        if (idx[p] < 0) continue;
        const double* pk = L.packed(p);
        double d = -L.c0_at(p);
        for (int a = 0; a < nc; ++a) {
          const int xa = g.x_axis(a), ya = g.y_axis(a);
          double d2 = -2.0 / (g.axis(xa).h() * g.axis(xa).h());
          if (ya >= 0) d2 += -2.0 / (g.axis(ya).h() * g.axis(ya).h());
          d += pk[a] * 0.25 * d2;
        }
        diag_[p] = d;
      }
    });
  }

  Grid grid_;
  GridKind kind_;
  bool project_;
  std::size_t count_ = 0;
  fftw_complex* buf_ = nullptr;
  double* rbuf_ = nullptr;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr, r2r_ = nullptr;
  double dst_scale_ = 1.0;
  std::vector<double> sym_;
  std::vector<double> diag_;
};

LinSolveStats solve_direct(const ma::LinearizedOp& L, const std::vector<double>& b,
                           std::vector<double>& x) {
  Eigen::SparseMatrix<double> A = L.assemble();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) fail(errc::internal, "direct solve: factorization failed");
  Eigen::VectorXd rhs(A.rows());
  const auto& idx = L.interior_index();
  for (std::size_t p = 0; p < b.size(); ++p)
    if (idx[p] >= 0) rhs[idx[p]] = b[p];
  Eigen::VectorXd sol = lu.solve(rhs);
  x.assign(b.size(), 0.0);
  for (std::size_t p = 0; p < b.size(); ++p)
    if (idx[p] >= 0) x[p] = sol[idx[p]];
  LinSolveStats st;
  st.used_direct = true;
  st.converged = true;
  st.rel_residual = (A * sol - rhs).norm() / std::max(1e-300, rhs.norm());
  return st;
}

}  // namespace

LinSolveStats solve_linear(const ma::LinearizedOp& L, const std::vector<double>& b,
                           std::vector<double>& x, const LinSolveOptions& opt) {
  if (!opt.project_mean && L.interior_count() <= opt.direct_threshold &&
      L.gr().kind() != GridKind::torus)
    return solve_direct(L, b, x);
  SpectralPrecond K(L, opt.project_mean);

  std::vector<double> rhs = b;
  const auto& idx = L.interior_index();
  par::parallel_for(rhs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p)
      if (idx[p] < 0) rhs[p] = 0.0;
  });
  if (opt.project_mean) project_mean_interior(L, rhs);

  const double bnorm = std::sqrt(dot_interior(L, rhs, rhs));
  x.assign(rhs.size(), 0.0);
  LinSolveStats st;
  if (bnorm == 0.0) {
    st.converged = true;
    return st;
  }

  auto apply_op = [&](const std::vector<double>& v, std::vector<double>& out) {
    L.apply(v, out);
    if (opt.project_mean) project_mean_interior(L, out);
  };

  // preconditioned BiCGSTAB
  std::vector<double> r = rhs, rhat = rhs, p(rhs.size(), 0.0), v(rhs.size(), 0.0);
  std::vector<double> s(rhs.size(), 0.0), t(rhs.size(), 0.0), phat, shat;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double rnorm = bnorm;
  for (int it = 0; it < opt.max_iter; ++it) {
    const double rho1 = dot_interior(L, rhat, r);
    if (rho1 == 0.0) break;
    if (it == 0) {
      p = r;
    } else {
      const double beta = (rho1 / rho) * (alpha / omega);
      par::parallel_for(p.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t q = lo; q < hi; ++q) p[q] = r[q] + beta * (p[q] - omega * v[q]);
      });
    }
    rho = rho1;
    K.apply(L, p, phat);
    apply_op(phat, v);
    const double rv = dot_interior(L, rhat, v);
    if (rv == 0.0) break;
    alpha = rho1 / rv;
    par::parallel_for(s.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t q = lo; q < hi; ++q) s[q] = r[q] - alpha * v[q];
    });
    double snorm = std::sqrt(dot_interior(L, s, s));
    if (snorm / bnorm < opt.tol) {
      par::parallel_for(x.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t q = lo; q < hi; ++q) x[q] += alpha * phat[q];
      });
      st.iterations = it + 1;
      st.rel_residual = snorm / bnorm;
      st.converged = true;
      if (opt.project_mean) project_mean_interior(L, x);
      return st;
    }
    K.apply(L, s, shat);
    apply_op(shat, t);
    const double tt = dot_interior(L, t, t);
    if (tt == 0.0) break;
    omega = dot_interior(L, t, s) / tt;
    par::parallel_for(x.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t q = lo; q < hi; ++q) {
        x[q] += alpha * phat[q] + omega * shat[q];
        r[q] = s[q] - omega * t[q];
      }
    });
    rnorm = std::sqrt(dot_interior(L, r, r));
    st.iterations = it + 1;
    st.rel_residual = rnorm / bnorm;
    if (rnorm / bnorm < opt.tol) {
      st.converged = true;
      if (opt.project_mean) project_mean_interior(L, x);
      return st;
    }
    if (omega == 0.0) break;
  }
  st.rel_residual = rnorm / bnorm;
  st.converged = st.rel_residual < opt.tol * 10.0;
  if (opt.project_mean) project_mean_interior(L, x);
  return st;
}

grid::ScalarField solve_poisson_dirichlet(const grid::Grid& gr, const grid::Form11Field& g,
                                          const grid::ScalarField& rhs,
                                          const grid::ScalarField& bdata) {
  if (gr.kind() == GridKind::torus)
    fail(errc::unsupported, "poisson dirichlet: needs a bounded grid");
  // Linearize the flat problem gg = g at u = 0 to reuse the stencil assembly.
  ma::MAProblem pb{gr, g, g, ma::RHSSpec::constant(1.0), bdata, std::nullopt};
  grid::ScalarField flat(gr);  // gg = chi + Hess(0) = g, c0 = 0
  ma::LinearizedOp L = ma::linearize(flat, pb);

  // Move the boundary data to the right-hand side: solve L x = rhs - L b_ext.
  grid::ScalarField bext(gr);
  ma::impose_boundary(bext, bdata);
  std::vector<double> Lb;
  L.apply(bext.values(), Lb);
  std::vector<double> b(gr.count(), 0.0);
  const auto& idx = L.interior_index();
  for (std::size_t p = 0; p < gr.count(); ++p)
    if (idx[p] >= 0) b[p] = rhs[p] - Lb[p];
  std::vector<double> x;
  LinSolveOptions opt;
  LinSolveStats st = solve_linear(L, b, x, opt);
  if (!st.converged) fail(errc::internal, "poisson dirichlet: linear solve failed");
  grid::ScalarField out(gr);
  for (std::size_t p = 0; p < gr.count(); ++p) out[p] = x[p] + bext[p];
  return out;
}

}  // namespace cma::solve
