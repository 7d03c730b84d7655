#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ivbounds/errors.hpp"
#include "ivbounds/lp_core.hpp"
#include "ivbounds/model.hpp"
#include "ivbounds/rational.hpp"
#include "ivbounds/rays.hpp"

namespace ivb {

// Parameters of a multi-arm dual vertex w(a, s): a distinguished arm a and an
// arm assignment s_y in [ell] \ {a}.  The coordinate at y = n-1 never enters
// the vector, so representatives are indexed by the length n-1 prefix, which
// must be non-constant.
struct MultivalVertexParams {
  std::size_t a = 0;
  std::vector<std::size_t> s;  // length n-1
};

// ell * ((ell-1)^(n-1) - (ell-1)) M-distinct vertices; zero when n = 2 or
// ell = 2.
inline std::uint64_t count_multival_vertices(std::size_t n, std::size_t ell) {
  std::uint64_t p = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) p *= (ell - 1);
  return ell * (p - (ell - 1));
}

// (n-1) * ell * ((ell-1)^n - (ell-1)) exhibited necessary inequalities.
inline std::uint64_t count_multival_inequalities(std::size_t n, std::size_t ell) {
  std::uint64_t p = 1;
  for (std::size_t i = 0; i < n; ++i) p *= (ell - 1);
  return (n - 1) * ell * (p - (ell - 1));
}

namespace detail {

// Digits in [ell] \ {skip}, advanced as a mixed-radix counter.
inline bool next_assignment(std::vector<std::size_t>& digits, std::size_t ell, std::size_t skip) {
  for (std::size_t pos = digits.size(); pos-- > 0;) {
    std::size_t d = digits[pos] + 1;
    if (d == skip) ++d;
    if (d < ell) {
      digits[pos] = d;
      for (std::size_t q = pos + 1; q < digits.size(); ++q) digits[q] = skip == 0 ? 1 : 0;
      return true;
    }
    digits[pos] = skip == 0 ? 1 : 0;
  }
  return false;
}

inline bool is_constant(const std::vector<std::size_t>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[0]) return false;
  return true;
}

}  // namespace detail

// The dual vertices w(a, s):
//   w_{y1,a} = gamma_y - gamma_{n-1},   w_{y0,a}   = gamma_0 - gamma_{n-1},
//   w_{y0,s_y} = gamma_{n-1} - gamma_y, all other entries zero.
inline DualVector multival_vertex(const MultivalVertexParams& prm, const OutcomeSupport& support,
                                  std::size_t ell) {
  const std::size_t n = support.size();
  const Rational gl = support.gamma(n - 1);
  DualVector w(n, ell);
  for (std::size_t y = 0; y < n; ++y) {
    w.at(y, 1, prm.a) = support.gamma(y) - gl;
    w.at(y, 0, prm.a) = support.gamma(0) - gl;
    if (y + 1 < n) w.at(y, 0, prm.s[y]) = gl - support.gamma(y);
  }
  return w;
}

template <typename Fn>
void enumerate_multival_vertices(const OutcomeSupport& support, std::size_t ell, Fn&& fn) {
  const std::size_t n = support.size();
  if (ell < 2) throw ShapeMismatch("need at least two instrument arms");
  if (n < 3 || ell < 3) return;  // the prefix cannot be non-constant
  for (std::size_t a = 0; a < ell; ++a) {
    std::vector<std::size_t> s(n - 1, a == 0 ? 1 : 0);
    do {
      if (detail::is_constant(s)) continue;
      fn(MultivalVertexParams{a, s}, multival_vertex({a, s}, support, ell));
    } while (detail::next_assignment(s, ell, a));
  }
}

// Valid (not claimed sharp) lower bound for ell >= 3: the maximum of w^T p
// over the exhibited vertex family.  Empty family (n = 2) yields nullopt,
// standing in for negative infinity.
inline std::optional<Rational> multival_lower_bound(const ObservedLaw& law) {
  if (law.ell() < 3) throw UnsupportedInstrumentArity(law.ell());
  std::optional<Rational> best;
  enumerate_multival_vertices(law.support(), law.ell(),
                              [&](const MultivalVertexParams&, const DualVector& w) {
                                Rational v = 0;
                                for (std::size_t c = 0; c < w.v.size(); ++c)
                                  if (w.v[c] != 0) v += w.v[c] * law.values()[c];
                                if (!best || v > *best) best = std::move(v);
                              });
  return best;
}

// The multi-arm inequalities: for y' in [n-1], j' in [ell], and a non-constant
// assignment (j_0..j_{n-1}) avoiding j',
//   p_{y'1,j'} <= sum_{j in {j_0..j_{n-1}}} p_{y'1,j} + sum_y p_{y0,j_y},
// where the first sum ranges over the set of distinct assigned arms.
template <typename Fn>
void enumerate_multival_inequalities(std::size_t n, std::size_t ell, Fn&& fn) {
  if (n < 2 || ell < 2) throw ShapeMismatch("need n >= 2 and ell >= 2");
  for (std::size_t yp = 0; yp + 1 < n; ++yp)
    for (std::size_t jp = 0; jp < ell; ++jp) {
      std::vector<std::size_t> j(n, jp == 0 ? 1 : 0);
      do {
        if (detail::is_constant(j)) continue;
        Ray ray;
        ray.family = RayFamily::Multival;
        ray.vec = DualVector(n, ell);
        ray.vec.at(yp, 1, jp) = 1;
        for (std::size_t y = 0; y < n; ++y) {
          ray.vec.at(y, 0, j[y]) = -1;
          ray.vec.at(yp, 1, j[y]) = -1;
        }
        IvInequality q;
        q.family = IneqFamily::Eq14;
        q.y_prime = yp;
        q.j_prime = jp;
        q.j_seq = j;
        q.expr = LinearExpr(n, ell);
        q.expr.coeff = ray.vec.v;
        q.ray = std::move(ray);
        fn(std::move(q));
      } while (detail::next_assignment(j, ell, jp));
    }
}

// Falsification for an arbitrary number of arms.  For ell = 2 this delegates
// to the complete test; otherwise the exhibited necessary family plus the
// probability axioms are checked and the report is flagged incomplete.
inline FalsificationReport multival_test(const ObservedLaw& law) {
  if (law.ell() == 2) return falsification_test(law);
  FalsificationReport rep;
  rep.complete = false;
  rep.axiom_failures = validate_axioms(law.values(), law.n(), law.ell());
  enumerate_multival_inequalities(law.n(), law.ell(), [&](IvInequality q) {
    const Rational v = q.expr.evaluate(law);
    if (v > 0) rep.violations.push_back({std::move(q), v});
  });
  rep.falsified = !rep.violations.empty() || !rep.axiom_failures.empty();
  return rep;
}

}  // namespace ivb
