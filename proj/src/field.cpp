#include "cma/field.hpp"

#include <cmath>

namespace cma::grid {

ScalarField ScalarField::sample(const Grid& g,
                                const std::function<double(const double*)>& fn,
                                bool check_periodic) {
  ScalarField f(g);
  std::vector<double> x(g.naxes());
  Walker w(g);
  for (std::size_t p = 0; p < g.count(); ++p, w.advance()) {
    g.coords(w.mi(), x.data());
    f.v_[p] = fn(x.data());
  }
  if (check_periodic) {
    // probe f(x + period e_a) = f(x) at a few interior positions
    for (int a = 0; a < g.naxes(); ++a) {
      if (!g.axis(a).periodic) continue;
      for (int probe = 0; probe < 3; ++probe) {
        for (int b = 0; b < g.naxes(); ++b)
          x[b] = g.axis(b).lo + g.axis(b).len * (0.13 + 0.29 * probe + 0.07 * b);
        const double v0 = fn(x.data());
        x[a] += g.axis(a).len;
        const double v1 = fn(x.data());
        const double scale = std::max({1.0, std::abs(v0), std::abs(v1)});
        if (std::abs(v1 - v0) > 1e-9 * scale)
          fail(errc::invalid_input, "scalar field: function is not periodic along a torus axis");
      }
    }
  }
  f.check_finite();
  return f;
}

double ScalarField::sup_abs() const {
  return par::reduce_max(v_.size(), [&](std::size_t lo, std::size_t hi) {
    double m = 0.0;
    for (std::size_t p = lo; p < hi; ++p) m = std::max(m, std::abs(v_[p]));
    return m;
  });
}

double ScalarField::mean() const {
  double s = par::reduce_sum(v_.size(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t p = lo; p < hi; ++p) acc += v_[p];
    return acc;
  });
  return s / double(v_.size());
}

void ScalarField::shift(double c) {
  par::parallel_for(v_.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) v_[p] += c;
  });
}

void ScalarField::check_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) fail(errc::invalid_input, "scalar field: non-finite value");
}

Form11Field Form11Field::constant(const Grid& g, const Eigen::MatrixXcd& m) {
  Form11Field f;
  f.grid_ = g;
  f.nc_ = int(m.rows());
  if (f.nc_ != g.ncomplex()) fail(errc::invalid_input, "form field: dimension mismatch");
  f.constant_ = true;
  f.c0_ = m;
  f.check_hermitian();
  return f;
}

Form11Field Form11Field::varying(const Grid& g, int nc) {
  Form11Field f;
  f.grid_ = g;
  f.nc_ = nc;
  if (nc != g.ncomplex()) fail(errc::invalid_input, "form field: dimension mismatch");
  f.constant_ = false;
  f.v_.assign(g.count() * std::size_t(nc) * nc, cd(0.0));
  return f;
}

Eigen::MatrixXcd Form11Field::at(std::size_t p) const {
  if (constant_) return c0_;
  Eigen::MatrixXcd m(nc_, nc_);
  const cd* src = raw(p);
  for (int i = 0; i < nc_; ++i)
    for (int j = 0; j < nc_; ++j) m(i, j) = src[i * nc_ + j];
  return m;
}

void Form11Field::set(std::size_t p, const Eigen::MatrixXcd& m) {
  if (constant_) fail(errc::unsupported, "form field: cannot set entries of a constant field");
  cd* dst = raw(p);
  for (int i = 0; i < nc_; ++i)
    for (int j = 0; j < nc_; ++j) dst[i * nc_ + j] = m(i, j);
}

void Form11Field::check_hermitian(double tol) const {
  if (constant_) {
    for (int i = 0; i < nc_; ++i)
      for (int j = 0; j < nc_; ++j)
        if (std::abs(c0_(i, j) - std::conj(c0_(j, i))) > tol)
          fail(errc::invalid_input, "form field: not Hermitian");
    return;
  }
  for (std::size_t p = 0; p < grid_.count(); ++p) {
    const cd* m = raw(p);
    for (int i = 0; i < nc_; ++i)
      for (int j = 0; j < nc_; ++j)
        if (std::abs(m[i * nc_ + j] - std::conj(m[j * nc_ + i])) > tol)
          fail(errc::invalid_input, "form field: not Hermitian");
  }
}

}  // namespace cma::grid
