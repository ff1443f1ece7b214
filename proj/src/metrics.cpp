#include "cma/metrics.hpp"

#include <cmath>
#include <random>

namespace cma::geom {

PolyMetric::PolyMetric(std::string name, int n, std::vector<std::vector<Poly>> entries)
    : name_(std::move(name)), n_(n), entries_(std::move(entries)) {
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) entries_[j][i] = entries_[i][j].conjugate();
}

ChartJet PolyMetric::jet(const std::vector<cd>& z) const {
  ChartJet out;
  out.n = n_;
  out.g = Eigen::MatrixXcd(n_, n_);
  out.dg.assign(n_, Eigen::MatrixXcd(n_, n_));
  out.has_mixed2 = true;
  out.ddm = Tensor4(n_);
  out.has_holo2 = true;
  out.ddh = Tensor4(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const Poly& e = entries_[i][j];
      out.g(i, j) = e.eval(z);
      std::vector<Poly> dk(n_);
      for (int k = 0; k < n_; ++k) {
        dk[k] = e.dz(k);
        out.dg[k](i, j) = dk[k].eval(z);
      }
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          out.ddm(i, j, k, l) = dk[k].dzbar(l).eval(z);
          out.ddh(i, j, k, l) = dk[k].dz(l).eval(z);
        }
    }
  return out;
}

ChartJet ExpDiagonalMetric::jet(const std::vector<cd>& z) const {
  ChartJet out;
  out.n = n_;
  out.g = Eigen::MatrixXcd::Zero(n_, n_);
  out.dg.assign(n_, Eigen::MatrixXcd::Zero(n_, n_));
  out.has_mixed2 = true;
  out.ddm = Tensor4(n_);
  out.has_holo2 = true;
  out.ddh = Tensor4(n_);
  // g_{i i~} = exp(z_i conj(z_i)):
  //   d/dz_k        -> delta_{ki} conj(z_i) g_{i i~}
  //   d^2/dz_k dz~_l -> delta_{ki} delta_{li} (1 + |z_i|^2) g_{i i~}
  //   d^2/dz_k dz_l  -> delta_{ki} delta_{li} conj(z_i)^2 g_{i i~}
  for (int i = 0; i < n_; ++i) {
    const cd zi = z[i];
    const double e = std::exp(std::norm(zi));
    out.g(i, i) = e;
    out.dg[i](i, i) = std::conj(zi) * e;
    out.ddm(i, i, i, i) = (1.0 + std::norm(zi)) * e;
    out.ddh(i, i, i, i) = std::conj(zi) * std::conj(zi) * e;
  }
  return out;
}

namespace {

cd random_coeff(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  return scale * cd(U(rng), U(rng));
}

std::vector<std::vector<Poly>> identity_entries(int n) {
  std::vector<std::vector<Poly>> e(n, std::vector<Poly>(n, Poly(n)));
  for (int i = 0; i < n; ++i) e[i][i] = Poly::constant(n, 1.0);
  return e;
}

// A real polynomial of the form c0 + sum Re(a_k z_k) + sum b_kl z_k conj(z_l)
// with Hermitian b; used as a conformal factor.
Poly random_real_poly(int n, std::mt19937_64& rng, double scale) {
  Poly p = Poly::constant(n, 1.0);
  for (int k = 0; k < n; ++k) {
    cd a = random_coeff(rng, scale);
    p += Poly::var(n, k) * a + Poly::var_conj(n, k) * std::conj(a);
  }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      cd b = (k == l) ? cd(std::abs(random_coeff(rng, scale)), 0.0) : random_coeff(rng, scale);
      p += Poly::var(n, k) * Poly::var_conj(n, l) * (0.5 * b);
      p += Poly::var(n, l) * Poly::var_conj(n, k) * (0.5 * std::conj(b));
    }
  return p;
}

}  // namespace

MetricPtr flat_metric(int n) {
  return std::make_shared<PolyMetric>("flat", n, identity_entries(n));
}

MetricPtr conformal_poly_metric(int n, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  Poly f = random_real_poly(n, rng, scale);
  auto e = identity_entries(n);
  for (int i = 0; i < n; ++i) e[i][i] = f;
  return std::make_shared<PolyMetric>("conformal-" + std::to_string(seed), n, std::move(e));
}

MetricPtr kaehler_potential_metric(int n, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  // Potential |z|^2 + Re(sum c z_a z_b conj(z_c)) + quartic Hermitian terms;
  // the metric is its mixed Hessian, hence Kahler by construction.
  Poly phi(n);
  for (int a = 0; a < n; ++a) phi += Poly::var(n, a) * Poly::var_conj(n, a);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        cd coef = random_coeff(rng, scale);
        Poly t = Poly::var(n, a) * Poly::var(n, b) * Poly::var_conj(n, c);
        phi += t * coef + t.conjugate() * std::conj(coef);
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cd coef = random_coeff(rng, 0.5 * scale);
      Poly t = Poly::var(n, a) * Poly::var(n, a) * Poly::var_conj(n, b) * Poly::var_conj(n, b);
      phi += t * coef + t.conjugate() * std::conj(coef);
    }
  std::vector<std::vector<Poly>> e(n, std::vector<Poly>(n, Poly(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e[i][j] = phi.dz(i).dzbar(j);
  return std::make_shared<PolyMetric>("kaehler-" + std::to_string(seed), n, std::move(e));
}

MetricPtr nonkaehler_linear_metric(int n, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  auto e = identity_entries(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k) {
        e[i][j] += Poly::var_conj(n, k) * random_coeff(rng, scale);
        e[i][j] += Poly::var(n, k) * random_coeff(rng, scale);
      }
    }
  // Re-symmetrize the upper triangle only; the constructor mirrors it.
  return std::make_shared<PolyMetric>("nonkaehler-lin-" + std::to_string(seed), n, std::move(e));
}

MetricPtr nonkaehler_canonical_metric() {
  // The z2-bar perturbation turns out to be generated by the potential
  // |z|^2 + Re(z_1 conj(z_2)^2), so its torsion vanishes; it stays in the
  // corpus as the hand-expansion anchor.
  const int n = 2;
  auto e = identity_entries(n);
  e[0][1] = Poly::var_conj(n, 1);  // g_{1 2~} = conj(z_2)
  return std::make_shared<PolyMetric>("hermitian-z2bar", n, std::move(e));
}

MetricPtr nonkaehler_torsionful_metric() {
  // g_{1 2~} = conj(z_1): the symmetry g_{j l~, i} = g_{i l~, j} fails at
  // every point and T^1_{12} = -1 at the origin.
  const int n = 2;
  auto e = identity_entries(n);
  e[0][1] = Poly::var_conj(n, 0);
  return std::make_shared<PolyMetric>("nonkaehler-z1bar", n, std::move(e));
}

MetricPtr nonkaehler_quadratic_metric(int n, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  auto e = identity_entries(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Poly pert(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          pert += Poly::var(n, a) * Poly::var(n, b) * random_coeff(rng, scale);
          pert += Poly::var(n, a) * Poly::var_conj(n, b) * random_coeff(rng, scale);
        }
      if (i == j) {
        e[i][j] += pert + pert.conjugate();  // keep the diagonal real
      } else {
        e[i][j] += pert;
      }
    }
  return std::make_shared<PolyMetric>("nonkaehler-quad-" + std::to_string(seed), n, std::move(e));
}

bool is_kaehler_at(const AnalyticMetric& m, const std::vector<cd>& z, double tol) {
  ChartJet jet = m.jet(z);
  for (int i = 0; i < jet.n; ++i)
    for (int j = 0; j < jet.n; ++j)
      for (int l = 0; l < jet.n; ++l)
        if (std::abs(jet.dg[i](j, l) - jet.dg[j](i, l)) > tol) return false;
  return true;
}

std::vector<MetricPtr> standard_corpus() {
  std::vector<MetricPtr> c;
  c.push_back(flat_metric(2));
  c.push_back(std::make_shared<ExpDiagonalMetric>(2));
  for (unsigned s : {11u, 12u, 13u}) c.push_back(conformal_poly_metric(2, s));
  for (unsigned s : {21u, 22u, 23u, 24u}) c.push_back(kaehler_potential_metric(2, s));
  c.push_back(nonkaehler_canonical_metric());
  c.push_back(nonkaehler_torsionful_metric());
  for (unsigned s : {31u, 32u, 33u, 34u, 35u}) c.push_back(nonkaehler_linear_metric(2, s));
  for (unsigned s : {41u, 42u, 43u, 44u, 45u}) c.push_back(nonkaehler_quadratic_metric(2, s));
  c.push_back(conformal_poly_metric(2, 51, 0.12));
  c.push_back(nonkaehler_linear_metric(2, 52, 0.15));
  return c;
}

std::vector<std::vector<cd>> sample_points(int n, int count, unsigned seed, double radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-radius, radius);
  std::vector<std::vector<cd>> pts(count, std::vector<cd>(n));
  for (auto& p : pts)
    for (int j = 0; j < n; ++j) p[j] = cd(U(rng), U(rng)) / std::sqrt(2.0);
  return pts;
}

}  // namespace cma::geom
