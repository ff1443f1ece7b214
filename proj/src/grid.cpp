#include "cma/grid.hpp"

#include <algorithm>
#include <cmath>

namespace cma::grid {

Grid::Grid(GridKind kind, int n_base, std::vector<Axis> axes)
    : kind_(kind), n_(n_base), axes_(std::move(axes)) {
  const int na = int(axes_.size());
  const int expected = kind_ == GridKind::product ? 2 * n_ + 1 : 2 * n_;
  if (na != expected) fail(errc::invalid_input, "grid: axis count does not match dimension");
  for (const Axis& a : axes_) {
    if (a.len <= 0.0) fail(errc::invalid_input, "grid: nonpositive axis extent");
    if (a.periodic && a.res < 8) fail(errc::invalid_input, "grid: torus resolution below 8");
    if (!a.periodic && a.res < 4)
      fail(errc::invalid_input, "grid: bounded axis needs at least 4 points");
  }
  strides_.assign(na, 1);
  for (int a = na - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * axes_[a + 1].res;
  count_ = strides_[0] * axes_[0].res;
}

void Grid::decode(std::size_t p, int* mi) const {
  for (int a = 0; a < naxes(); ++a) {
    mi[a] = int(p / strides_[a]);
    p -= std::size_t(mi[a]) * strides_[a];
  }
}

std::size_t Grid::encode(const int* mi) const {
  std::size_t p = 0;
  for (int a = 0; a < naxes(); ++a) p += std::size_t(mi[a]) * strides_[a];
  return p;
}

std::size_t Grid::neighbor(std::size_t p, const int* mi, int a, int s) const {
  const Axis& ax = axes_[a];
  int ia = mi[a] + s;
  if (ax.periodic) {
    if (ia < 0) ia += ax.res;
    if (ia >= ax.res) ia -= ax.res;
  }
  return p + (std::size_t(ia) - std::size_t(mi[a])) * strides_[a];
}

bool Grid::is_interior(const int* mi) const {
  for (int a = 0; a < naxes(); ++a) {
    const Axis& ax = axes_[a];
    if (!ax.periodic && (mi[a] == 0 || mi[a] == ax.res - 1)) return false;
  }
  return true;
}

std::size_t Grid::interior_count() const {
  std::size_t c = 1;
  for (const Axis& a : axes_) c *= a.periodic ? a.res : a.res - 2;
  return c;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (const Axis& a : axes_) v *= a.h();
  return v;
}

double Grid::max_h() const {
  double m = 0.0;
  for (const Axis& a : axes_) m = std::max(m, a.h());
  return m;
}

bool Grid::same_layout(const Grid& o) const {
  if (kind_ != o.kind_ || n_ != o.n_ || axes_.size() != o.axes_.size()) return false;
  for (std::size_t a = 0; a < axes_.size(); ++a)
    if (axes_[a].res != o.axes_[a].res || axes_[a].lo != o.axes_[a].lo ||
        axes_[a].len != o.axes_[a].len || axes_[a].periodic != o.axes_[a].periodic)
      return false;
  return true;
}

Grid torus_grid(int n, const std::vector<double>& periods, const std::vector<int>& res) {
  if (int(periods.size()) != 2 * n || int(res.size()) != 2 * n)
    fail(errc::invalid_input, "torus_grid: need 2n periods and resolutions");
  std::vector<Axis> axes(2 * n);
  for (int a = 0; a < 2 * n; ++a) axes[a] = Axis{res[a], 0.0, periods[a], true};
  return Grid(GridKind::torus, n, std::move(axes));
}

Grid torus_grid_uniform(int n, double period, int res) {
  return torus_grid(n, std::vector<double>(2 * n, period), std::vector<int>(2 * n, res));
}

Grid box_grid(int n, const std::vector<double>& lo, const std::vector<double>& hi,
              const std::vector<int>& res) {
  if (int(lo.size()) != 2 * n || int(hi.size()) != 2 * n || int(res.size()) != 2 * n)
    fail(errc::invalid_input, "box_grid: need 2n bounds and resolutions");
  std::vector<Axis> axes(2 * n);
  for (int a = 0; a < 2 * n; ++a) {
    if (hi[a] <= lo[a]) fail(errc::invalid_input, "box_grid: empty interval");
    axes[a] = Axis{res[a], lo[a], hi[a] - lo[a], false};
  }
  return Grid(GridKind::box, n, std::move(axes));
}

Grid box_grid_uniform(int n, double lo, double hi, int res) {
  return box_grid(n, std::vector<double>(2 * n, lo), std::vector<double>(2 * n, hi),
                  std::vector<int>(2 * n, res));
}

Grid product_grid(const Grid& base, int t_res) {
  if (base.kind() != GridKind::torus)
    fail(errc::invalid_input, "product_grid: base must be a torus");
  if (t_res < 4) fail(errc::invalid_input, "product_grid: t resolution below 4");
  std::vector<Axis> axes;
  for (int a = 0; a < base.naxes(); ++a) axes.push_back(base.axis(a));
  axes.push_back(Axis{t_res, 0.0, 1.0, false});
  return Grid(GridKind::product, base.base_n(), std::move(axes));
}

}  // namespace cma::grid
