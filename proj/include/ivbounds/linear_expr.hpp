#pragma once

#include <vector>

#include "ivbounds/model.hpp"
#include "ivbounds/rational.hpp"

namespace ivb {

// A symbolic linear functional of the observed probabilities:
//   sum over (y,d,z) of coeff * p_{yd,z}  +  constant.
struct LinearExpr {
  std::size_t n = 0, ell = 0;
  std::vector<Rational> coeff;  // flat (y, d, z)
  Rational constant = 0;

  LinearExpr() = default;
  LinearExpr(std::size_t n_, std::size_t ell_)
      : n(n_), ell(ell_), coeff(n_ * 2 * ell_, Rational(0)) {}

  Rational& at(std::size_t y, std::size_t d, std::size_t z) {
    return coeff[ydz_index(y, d, z, ell)];
  }
  const Rational& at(std::size_t y, std::size_t d, std::size_t z) const {
    return coeff[ydz_index(y, d, z, ell)];
  }

  Rational evaluate(const ObservedLaw& law) const {
    Rational s = constant;
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t d = 0; d < 2; ++d)
        for (std::size_t z = 0; z < ell; ++z) {
          const Rational& c = at(y, d, z);
          if (c != 0) s += c * law.p(y, d, z);
        }
    return s;
  }

  friend bool operator==(const LinearExpr& a, const LinearExpr& b) {
    return a.n == b.n && a.ell == b.ell && a.coeff == b.coeff && a.constant == b.constant;
  }
};

}  // namespace ivb
