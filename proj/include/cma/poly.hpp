#pragma once

// Sparse polynomials in (z_1..z_n, conj(z_1)..conj(z_n)) with complex
// coefficients. Differentiation and evaluation are exact, which is what the
// analytic-metric corpus and the identity oracles rely on. Cold path only.

#include <map>
#include <vector>

#include "cma/core.hpp"

namespace cma {

class Poly {
public:
  using Expo = std::vector<std::uint8_t>;  // length 2n: z exponents then conj exponents

  Poly() : nvars_(0) {}
  explicit Poly(int n_complex) : nvars_(2 * n_complex) {}

  int n_complex() const { return nvars_ / 2; }
  bool zero() const { return terms_.empty(); }

  static Poly constant(int n_complex, cd c);
  static Poly var(int n_complex, int j);        // z_j
  static Poly var_conj(int n_complex, int j);   // conj(z_j)

  Poly& add_term(const Expo& e, cd c);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(cd c) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }

  Poly dz(int j) const;      // d/dz_j
  Poly dzbar(int j) const;   // d/d conj(z_j)
  Poly conjugate() const;    // swaps z <-> conj(z), conjugates coefficients

  cd eval(const std::vector<cd>& z) const;

  // Partial derivative by a flat axis index a in [0, 2n): a < n means d/dz_a,
  // otherwise d/d conj(z_{a-n}).
  Poly d(int a) const { return a < n_complex() ? dz(a) : dzbar(a - n_complex()); }

private:
  int nvars_;
  std::map<Expo, cd> terms_;
};

}  // namespace cma
