#include "cma/ma_ops.hpp"

#include <cmath>

#include "cma/small_herm.hpp"
#include "cma/stencil.hpp"

namespace cma::ma {

namespace {

inline void chi_plus_hessian(const grid::ScalarField& u, const MAProblem& prob, std::size_t p,
                             const int* mi, cd* M) {
  grid::hessian_at(u, p, mi, M);
  const int nc = prob.gr.ncomplex();
  if (prob.chi.is_constant()) {
    const Eigen::MatrixXcd& c = prob.chi.constant_value();
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j) M[i * nc + j] += c(i, j);
  } else {
    const cd* c = prob.chi.raw(p);
    for (int k = 0; k < nc * nc; ++k) M[k] += c[k];
  }
}

inline double det_g_at(const MAProblem& prob, std::size_t p, double det_const) {
  if (prob.g.is_constant()) return det_const;
  return herm::det(prob.g.raw(p), prob.gr.ncomplex());
}

bool g_is_identity(const MAProblem& prob) {
  if (!prob.g.is_constant()) return false;
  const auto& m = prob.g.constant_value();
  return (m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

grid::ScalarField ma_residual(const grid::ScalarField& u, const MAProblem& prob) {
  const grid::Grid& g = prob.gr;
  if (!g.same_layout(u.grid())) fail(errc::invalid_input, "ma_residual: grid mismatch");
  const int nc = g.ncomplex();
  const double detg_const =
      prob.g.is_constant() ? prob.g.constant_value().determinant().real() : 0.0;
  grid::ScalarField out(g);
  par::parallel_for(g.count(), [&](std::size_t lo, std::size_t hi) {
    grid::Walker w(g);
    w.seek(lo);
    std::vector<cd> M(nc * nc);
    for (std::size_t p = lo; p < hi; ++p, w.advance()) {
      if (!g.is_interior(w.mi())) continue;
      chi_plus_hessian(u, prob, p, w.mi(), M.data());
      out[p] = herm::det(M.data(), nc) -
               prob.rhs.psi(g, p, u[p]) * det_g_at(prob, p, detg_const);
    }
  });
  return out;
}

grid::ScalarField log_residual(const grid::ScalarField& u, const MAProblem& prob) {
  const grid::Grid& g = prob.gr;
  if (!g.same_layout(u.grid())) fail(errc::invalid_input, "log_residual: grid mismatch");
  const int nc = g.ncomplex();
  const double detg_const =
      prob.g.is_constant() ? prob.g.constant_value().determinant().real() : 0.0;
  grid::ScalarField out(g);
  std::vector<int> bad((g.count() + par::kChunk - 1) / par::kChunk, 0);
  par::parallel_for(g.count(), [&](std::size_t lo, std::size_t hi) {
    grid::Walker w(g);
    w.seek(lo);
    std::vector<cd> M(nc * nc);
    for (std::size_t p = lo; p < hi; ++p, w.advance()) {
      if (!g.is_interior(w.mi())) continue;
      chi_plus_hessian(u, prob, p, w.mi(), M.data());
      const double det = herm::det(M.data(), nc);
      const double psi = prob.rhs.psi(g, p, u[p]);
      if (det <= 0.0 || psi <= 0.0) {
        bad[lo / par::kChunk] = 1;
        continue;
      }
      out[p] = std::log(det) - std::log(psi * det_g_at(prob, p, detg_const));
    }
  });
  for (int b : bad)
    if (b) fail(errc::precondition, "log_residual: needs admissible u and positive psi");
  return out;
}

std::pair<bool, double> admissibility(const grid::ScalarField& u, const MAProblem& prob) {
  const grid::Grid& g = prob.gr;
  if (!g.same_layout(u.grid())) fail(errc::invalid_input, "admissibility: grid mismatch");
  const int nc = g.ncomplex();
  const bool gid = g_is_identity(prob);
  std::vector<cd> gconst(nc * nc);
  if (prob.g.is_constant()) {
    const auto& m = prob.g.constant_value();
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j) gconst[i * nc + j] = m(i, j);
  }
  double lam = par::reduce_min(g.count(), [&](std::size_t lo, std::size_t hi) {
    grid::Walker w(g);
    w.seek(lo);
    std::vector<cd> M(nc * nc);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t p = lo; p < hi; ++p, w.advance()) {
      if (!g.is_interior(w.mi())) continue;
      chi_plus_hessian(u, prob, p, w.mi(), M.data());
      const cd* gp = prob.g.is_constant() ? gconst.data() : prob.g.raw(p);
      m = std::min(m, herm::lambda_min_rel(M.data(), gp, nc, gid));
    }
    return m;
  });
  return {lam > 1e-12, lam};
}

void LinearizedOp::apply(const std::vector<double>& v, std::vector<double>& w) const {
  const grid::Grid& g = grid_;
  const int nc = nc_;
  w.assign(g.count(), 0.0);
  const double* vv = v.data();
  par::parallel_for(g.count(), [&](std::size_t lo, std::size_t hi) {
    grid::Walker wk(g);
    wk.seek(lo);
    for (std::size_t p = lo; p < hi; ++p, wk.advance()) {
      if (interior_index_[p] < 0) continue;
      const int* mi = wk.mi();
      const double* pk = gginv_.data() + p * packsize_;
      double acc = -c0_[p] * vv[p];
      int off = nc;
      for (int a = 0; a < nc; ++a) {
        const int xa = g.x_axis(a), ya = g.y_axis(a);
        double d2 = 0.0;
        {
          const double h = g.axis(xa).h();
          d2 += (vv[g.neighbor(p, mi, xa, 1)] - 2.0 * vv[p] + vv[g.neighbor(p, mi, xa, -1)]) /
                (h * h);
        }
        if (ya >= 0) {
          const double h = g.axis(ya).h();
          d2 += (vv[g.neighbor(p, mi, ya, 1)] - 2.0 * vv[p] + vv[g.neighbor(p, mi, ya, -1)]) /
                (h * h);
        }
        acc += pk[a] * 0.25 * d2;
      }
      for (int a = 0; a < nc; ++a)
        for (int b = a + 1; b < nc; ++b, off += 2) {
          const double re = pk[off], im = pk[off + 1];
          const int xa = g.x_axis(a), ya = g.y_axis(a);
          const int xb = g.x_axis(b), yb = g.y_axis(b);
          auto cross = [&](int A, int B) {
            const double hA = g.axis(A).h(), hB = g.axis(B).h();
            const std::size_t pa = g.neighbor(p, mi, A, 1), ma = g.neighbor(p, mi, A, -1);
            return (vv[g.neighbor(pa, mi, B, 1)] - vv[g.neighbor(pa, mi, B, -1)] -
                    vv[g.neighbor(ma, mi, B, 1)] + vv[g.neighbor(ma, mi, B, -1)]) /
                   (4.0 * hA * hB);
          };
          double sum_re = cross(xa, xb);
          double sum_im = 0.0;
          if (ya >= 0 && yb >= 0) sum_re += cross(ya, yb);
          if (yb >= 0) sum_im += cross(xa, yb);
          if (ya >= 0) sum_im -= cross(ya, xb);
          acc += 0.5 * (re * sum_re - im * sum_im);
        }
      w[p] = acc;
    }
  });
}

Eigen::SparseMatrix<double> LinearizedOp::assemble() const {
  const grid::Grid& g = grid_;
  const int nc = nc_;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(ninterior_ * std::size_t(4 * nc * nc + 1));
  grid::Walker wk(g);
  for (std::size_t p = 0; p < g.count(); ++p, wk.advance()) {
    const std::int64_t row = interior_index_[p];
    if (row < 0) continue;
    const int* mi = wk.mi();
    const double* pk = gginv_.data() + p * packsize_;
    auto add = [&](std::size_t q, double c) {
      const std::int64_t col = interior_index_[q];
      if (col >= 0) trips.emplace_back(int(row), int(col), c);
    };
    add(p, -c0_[p]);
    int off = nc;
    for (int a = 0; a < nc; ++a) {
      const int axes[2] = {g.x_axis(a), g.y_axis(a)};
      for (int ax : axes) {
        if (ax < 0) continue;
        const double h = g.axis(ax).h();
        const double c = pk[a] * 0.25 / (h * h);
        add(g.neighbor(p, mi, ax, 1), c);
        add(g.neighbor(p, mi, ax, -1), c);
        add(p, -2.0 * c);
      }
    }
    for (int a = 0; a < nc; ++a)
      for (int b = a + 1; b < nc; ++b, off += 2) {
        const double re = pk[off], im = pk[off + 1];
        const int xa = g.x_axis(a), ya = g.y_axis(a);
        const int xb = g.x_axis(b), yb = g.y_axis(b);
        auto add_cross = [&](int A, int B, double c) {
          if (A < 0 || B < 0 || c == 0.0) return;
          const double w4 = c / (4.0 * g.axis(A).h() * g.axis(B).h());
          const std::size_t pa = g.neighbor(p, mi, A, 1), ma = g.neighbor(p, mi, A, -1);
          add(g.neighbor(pa, mi, B, 1), w4);
          add(g.neighbor(pa, mi, B, -1), -w4);
          add(g.neighbor(ma, mi, B, 1), -w4);
          add(g.neighbor(ma, mi, B, -1), w4);
        };
        add_cross(xa, xb, 0.5 * re);
        add_cross(ya, yb, 0.5 * re);
        add_cross(xa, yb, -0.5 * im);
        add_cross(ya, xb, 0.5 * im);
      }
  }
  Eigen::SparseMatrix<double> A{int(ninterior_), int(ninterior_)};
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

LinearizedOp linearize(const grid::ScalarField& u, const MAProblem& prob) {
  const grid::Grid& g = prob.gr;
  const int nc = g.ncomplex();
  LinearizedOp op;
  op.grid_ = g;
  op.prob_ = &prob;
  op.nc_ = nc;
  op.packsize_ = nc * nc;  // nc diagonal + 2 per off-diagonal pair
  op.gginv_.assign(g.count() * std::size_t(op.packsize_), 0.0);
  op.c0_.assign(g.count(), 0.0);
  op.interior_index_.assign(g.count(), -1);

  grid::Walker wk(g);
  std::size_t ni = 0;
  for (std::size_t p = 0; p < g.count(); ++p, wk.advance())
    if (g.is_interior(wk.mi())) op.interior_index_[p] = std::int64_t(ni++);
  op.ninterior_ = ni;

  const bool gid = g_is_identity(prob);
  std::vector<cd> gconst(nc * nc);
  if (prob.g.is_constant()) {
    const auto& m = prob.g.constant_value();
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j) gconst[i * nc + j] = m(i, j);
  }

  const std::size_t chunks = (g.count() + par::kChunk - 1) / par::kChunk;
  std::vector<double> lam_chunk(chunks, std::numeric_limits<double>::infinity());
  std::vector<Eigen::MatrixXcd> mean_chunk(chunks, Eigen::MatrixXcd::Zero(nc, nc));
  std::vector<double> c0_chunk(chunks, 0.0);
  std::vector<int> bad(chunks, 0);

  par::parallel_for(g.count(), [&](std::size_t lo, std::size_t hi) {
    grid::Walker w(g);
    w.seek(lo);
    std::vector<cd> M(nc * nc), Minv(nc * nc);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(nc, nc);
    double lam = std::numeric_limits<double>::infinity(), c0acc = 0.0;
    for (std::size_t p = lo; p < hi; ++p, w.advance()) {
      if (op.interior_index_[p] < 0) continue;
      chi_plus_hessian(u, prob, p, w.mi(), M.data());
      const cd* gp = prob.g.is_constant() ? gconst.data() : prob.g.raw(p);
      const double l = herm::lambda_min_rel(M.data(), gp, nc, gid);
      lam = std::min(lam, l);
      if (l <= 1e-12) {
        bad[lo / par::kChunk] = 1;
        continue;
      }
      herm::inverse(M.data(), nc, Minv.data());
      double* pk = op.gginv_.data() + p * op.packsize_;
      // pack the symbol gg^{a b~} = conj(Minv(a,b)): diagonal then upper pairs
      for (int a = 0; a < nc; ++a) pk[a] = Minv[a * nc + a].real();
      int off = nc;
      for (int a = 0; a < nc; ++a)
        for (int b = a + 1; b < nc; ++b, off += 2) {
          pk[off] = Minv[a * nc + b].real();
          pk[off + 1] = -Minv[a * nc + b].imag();
        }
      const double psi = prob.rhs.psi(g, p, u[p]);
      if (psi <= 0.0) {
        bad[lo / par::kChunk] = 1;
        continue;
      }
      op.c0_[p] = prob.rhs.psi_u(g, p, u[p]) / psi;
      c0acc += op.c0_[p];
      for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) acc(i, j) += Minv[i * nc + j];
    }
    lam_chunk[lo / par::kChunk] = lam;
    mean_chunk[lo / par::kChunk] = acc;
    c0_chunk[lo / par::kChunk] = c0acc;
  });

  for (int b : bad)
    if (b) fail(errc::precondition, "linearize: refused (u not admissible or psi <= 0)");
  op.lambda_min_ = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(nc, nc);
  double c0m = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    op.lambda_min_ = std::min(op.lambda_min_, lam_chunk[c]);
    mean += mean_chunk[c];
    c0m += c0_chunk[c];
  }
  op.mean_gginv_ = mean / double(ni);
  op.mean_c0_ = c0m / double(ni);
  return op;
}

double yau_inequality_margin(const std::vector<double>& lam) {
  double inv_sum = 0.0, sum = 0.0, prod = 1.0;
  for (double l : lam) {
    inv_sum += 1.0 / l;
    sum += l;
    prod *= l;
  }
  return std::pow(inv_sum, int(lam.size()) - 1) - sum / prod;
}

double log_concavity_margin(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  const double mid = std::log(((A + B) * 0.5).determinant().real());
  return mid - 0.5 * (std::log(A.determinant().real()) + std::log(B.determinant().real()));
}

}  // namespace cma::ma
