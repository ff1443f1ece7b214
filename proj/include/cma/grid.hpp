#pragma once

// Uniform grids over flat tori, boxes, and torus-x-interval products. One
// implementation serves all three: each real axis is either periodic or
// bounded, and boundary points are exactly the index-extremes of bounded
// axes. The product grid models M x A with a rotation-invariant annulus
// factor, so the extra complex coordinate carries a single real axis (t).

#include <array>
#include <cstddef>
#include <vector>

#include "cma/core.hpp"

namespace cma::grid {

enum class GridKind : std::uint32_t { torus = 0, box = 1, product = 2 };

struct Axis {
  int res = 0;       // grid points along the axis
  double lo = 0.0;
  double len = 0.0;  // period (periodic) or extent (bounded)
  bool periodic = false;
  double h() const { return periodic ? len / res : len / (res - 1); }
};

class Grid {
public:
  Grid() = default;
  Grid(GridKind kind, int n_base, std::vector<Axis> axes);

  GridKind kind() const { return kind_; }
  int base_n() const { return n_; }
  // Complex dimension of the ambient problem (n+1 on product grids).
  int ncomplex() const { return kind_ == GridKind::product ? n_ + 1 : n_; }
  int naxes() const { return int(axes_.size()); }
  const Axis& axis(int a) const { return axes_[a]; }
  std::size_t count() const { return count_; }
  std::size_t stride(int a) const { return strides_[a]; }

  // Real axes of complex coordinate c; y_axis is -1 for the suppressed
  // rotation direction of a product grid.
  int x_axis(int c) const { return c < n_ ? 2 * c : 2 * n_; }
  int y_axis(int c) const { return c < n_ ? 2 * c + 1 : -1; }

  void decode(std::size_t p, int* mi) const;
  std::size_t encode(const int* mi) const;
  // Neighbor along axis a by step s (|s| small); bounded axes must stay in
  // range (callers only move within the stencil-valid region).
  std::size_t neighbor(std::size_t p, const int* mi, int a, int s) const;

  bool is_interior(const int* mi) const;
  bool is_boundary(const int* mi) const { return !is_interior(mi); }
  std::size_t interior_count() const;

  double coord(int a, int ia) const { return axes_[a].lo + ia * axes_[a].h(); }
  void coords(const int* mi, double* x) const {
    for (int a = 0; a < naxes(); ++a) x[a] = coord(a, mi[a]);
  }

  double cell_volume() const;  // product of spacings
  double max_h() const;

  bool same_layout(const Grid& o) const;

private:
  GridKind kind_ = GridKind::torus;
  int n_ = 0;
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t count_ = 0;
};

// Flat torus C^n / Lambda with rectangular lattice; resolution >= 8 per axis.
Grid torus_grid(int n, const std::vector<double>& periods, const std::vector<int>& res);
Grid torus_grid_uniform(int n, double period, int res);

// Rectangular box in C^n; resolution counts points including both faces.
Grid box_grid(int n, const std::vector<double>& lo, const std::vector<double>& hi,
              const std::vector<int>& res);
Grid box_grid_uniform(int n, double lo, double hi, int res);

// base (torus) x [0,1] in t with t_res points including endpoints.
Grid product_grid(const Grid& base, int t_res);

// Odometer over all points; keeps the multi-index in step with the flat one.
class Walker {
public:
  explicit Walker(const Grid& g) : g_(&g), mi_(g.naxes(), 0) {}
  void seek(std::size_t p) {
    g_->decode(p, mi_.data());
    p_ = p;
  }
  void advance() {
    ++p_;
    for (int a = g_->naxes() - 1; a >= 0; --a) {
      if (++mi_[a] < g_->axis(a).res) break;
      mi_[a] = 0;
    }
  }
  std::size_t pos() const { return p_; }
  const int* mi() const { return mi_.data(); }

private:
  const Grid* g_;
  std::vector<int> mi_;
  std::size_t p_ = 0;
};

}  // namespace cma::grid
