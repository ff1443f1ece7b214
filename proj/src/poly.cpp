#include "cma/poly.hpp"

#include <cmath>

namespace cma {

namespace {
constexpr double kDrop = 0.0;  // keep exact zeros out of the map
}

Poly Poly::constant(int n_complex, cd c) {
  Poly p(n_complex);
  if (c != cd(0.0)) p.terms_[Expo(2 * n_complex, 0)] = c;
  return p;
}

Poly Poly::var(int n_complex, int j) {
  Poly p(n_complex);
  Expo e(2 * n_complex, 0);
  e[j] = 1;
  p.terms_[e] = cd(1.0);
  return p;
}

Poly Poly::var_conj(int n_complex, int j) {
  Poly p(n_complex);
  Expo e(2 * n_complex, 0);
  e[n_complex + j] = 1;
  p.terms_[e] = cd(1.0);
  return p;
}

Poly& Poly::add_term(const Expo& e, cd c) {
  if (nvars_ == 0) nvars_ = static_cast<int>(e.size());
  cd& slot = terms_[e];
  slot += c;
  if (std::abs(slot) <= kDrop) terms_.erase(e);
  return *this;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  if (r.nvars_ == 0) r.nvars_ = o.nvars_;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * cd(-1.0); }

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  r.nvars_ = nvars_ ? nvars_ : o.nvars_;
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      Expo e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
      r.add_term(e, ca * cb);
    }
  return r;
}

Poly Poly::operator*(cd c) const {
  Poly r;
  r.nvars_ = nvars_;
  if (c == cd(0.0)) return r;
  for (const auto& [e, v] : terms_) r.terms_[e] = v * c;
  return r;
}

Poly Poly::dz(int j) const {
  Poly r;
  r.nvars_ = nvars_;
  for (const auto& [e, c] : terms_) {
    if (e[j] == 0) continue;
    Expo d = e;
    d[j] -= 1;
    r.add_term(d, c * double(e[j]));
  }
  return r;
}

Poly Poly::dzbar(int j) const { return dz(n_complex() + j); }

Poly Poly::conjugate() const {
  Poly r;
  r.nvars_ = nvars_;
  const int n = n_complex();
  for (const auto& [e, c] : terms_) {
    Expo s(e.size());
    for (int j = 0; j < n; ++j) {
      s[j] = e[n + j];
      s[n + j] = e[j];
    }
    r.add_term(s, std::conj(c));
  }
  return r;
}

cd Poly::eval(const std::vector<cd>& z) const {
  const int n = n_complex();
  cd acc(0.0);
  for (const auto& [e, c] : terms_) {
    cd t = c;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < e[j]; ++k) t *= z[j];
      for (int k = 0; k < e[n + j]; ++k) t *= std::conj(z[j]);
    }
    acc += t;
  }
  return acc;
}

}  // namespace cma
