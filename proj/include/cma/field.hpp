#pragma once

#include <Eigen/Dense>
#include <functional>

#include "cma/grid.hpp"

namespace cma::grid {

class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(Grid g, double fill = 0.0)
      : grid_(std::move(g)), v_(grid_.count(), fill) {}

  // Samples fn(x) with x the real coordinates. On tori the function is probed
  // for periodicity along every axis and rejected if it fails.
  static ScalarField sample(const Grid& g,
                            const std::function<double(const double*)>& fn,
                            bool check_periodic = true);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t p) const { return v_[p]; }
  double& operator[](std::size_t p) { return v_[p]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }
  const double* data() const { return v_.data(); }
  double* data() { return v_.data(); }

  double sup_abs() const;
  double mean() const;  // plain average over all points
  void shift(double c);
  void check_finite() const;

private:
  Grid grid_;
  std::vector<double> v_;
};

// Per-point Hermitian nc x nc matrices; chi and background metrics are almost
// always constant, so that mode avoids the per-point storage entirely.
class Form11Field {
public:
  Form11Field() = default;
  static Form11Field constant(const Grid& g, const Eigen::MatrixXcd& m);
  static Form11Field varying(const Grid& g, int nc);

  const Grid& grid() const { return grid_; }
  int nc() const { return nc_; }
  bool is_constant() const { return constant_; }
  const Eigen::MatrixXcd& constant_value() const { return c0_; }

  Eigen::MatrixXcd at(std::size_t p) const;
  void set(std::size_t p, const Eigen::MatrixXcd& m);
  // Raw row-major access for varying mode.
  const cd* raw(std::size_t p) const { return v_.data() + p * nc_ * nc_; }
  cd* raw(std::size_t p) { return v_.data() + p * nc_ * nc_; }

  void check_hermitian(double tol = 1e-12) const;

private:
  Grid grid_;
  int nc_ = 0;
  bool constant_ = true;
  Eigen::MatrixXcd c0_;
  std::vector<cd> v_;
};

}  // namespace cma::grid
