#pragma once

// The analytic test-metric corpus: closed-form Hermitian metrics whose chart
// jets are produced by exact differentiation (no grid anywhere). Polynomial
// entries cover the conformal, Kahler-potential and non-Kahler families; the
// exp-diagonal metric is kept as a separate closed form.

#include <memory>
#include <string>

#include "cma/jet.hpp"
#include "cma/poly.hpp"

namespace cma::geom {

class AnalyticMetric {
public:
  virtual ~AnalyticMetric() = default;
  virtual int n() const = 0;
  virtual const std::string& name() const = 0;
  virtual ChartJet jet(const std::vector<cd>& z) const = 0;
};

// Entries are polynomials in (z, conj z) with entry(j,i) = conj-poly of
// entry(i,j) enforced at construction.
class PolyMetric : public AnalyticMetric {
public:
  PolyMetric(std::string name, int n, std::vector<std::vector<Poly>> entries);
  int n() const override { return n_; }
  const std::string& name() const override { return name_; }
  ChartJet jet(const std::vector<cd>& z) const override;
  const Poly& entry(int i, int j) const { return entries_[i][j]; }

private:
  std::string name_;
  int n_;
  std::vector<std::vector<Poly>> entries_;
};

// g_{i i~} = exp(|z_i|^2), off-diagonal zero.
class ExpDiagonalMetric : public AnalyticMetric {
public:
  explicit ExpDiagonalMetric(int n) : name_("exp-diagonal"), n_(n) {}
  int n() const override { return n_; }
  const std::string& name() const override { return name_; }
  ChartJet jet(const std::vector<cd>& z) const override;

private:
  std::string name_;
  int n_;
};

using MetricPtr = std::shared_ptr<const AnalyticMetric>;

MetricPtr flat_metric(int n);
MetricPtr conformal_poly_metric(int n, unsigned seed, double scale = 0.08);
MetricPtr kaehler_potential_metric(int n, unsigned seed, double scale = 0.05);
// Family A: antiholomorphic-linear off-diagonal perturbations (the canonical
// member has g_{1 2~} = conj(z_2), rest identity).
MetricPtr nonkaehler_linear_metric(int n, unsigned seed, double scale = 0.1);
MetricPtr nonkaehler_canonical_metric();
MetricPtr nonkaehler_torsionful_metric();
// Family B: mixed quadratic Hermitian perturbations with a different sparsity
// pattern than family A.
MetricPtr nonkaehler_quadratic_metric(int n, unsigned seed, double scale = 0.06);

// Whether the metric satisfies the symmetry g_{j l~, i} = g_{i l~, j} at z.
bool is_kaehler_at(const AnalyticMetric& m, const std::vector<cd>& z, double tol = 1e-12);

// The standard identity-verification corpus on C^2: flat, exp-diagonal,
// conformal, Kahler-potential and the two non-Kahler families (>= 20 members).
std::vector<MetricPtr> standard_corpus();

// Deterministic sample points with |z_j| <= radius.
std::vector<std::vector<cd>> sample_points(int n, int count, unsigned seed, double radius = 0.6);

}  // namespace cma::geom
