#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ivbounds/errors.hpp"
#include "ivbounds/linear_expr.hpp"
#include "ivbounds/lp_core.hpp"
#include "ivbounds/model.hpp"
#include "ivbounds/oracle.hpp"
#include "ivbounds/rational.hpp"

namespace ivb {

enum class RayFamily { I, II, III, IV, V, VI, Multival };

inline const char* ray_family_name(RayFamily f) {
  switch (f) {
    case RayFamily::I: return "I";
    case RayFamily::II: return "II";
    case RayFamily::III: return "III";
    case RayFamily::IV: return "IV";
    case RayFamily::V: return "V";
    case RayFamily::VI: return "VI";
    default: return "multival";
  }
}

// One representative per M-distinct extreme-ray class of the dual cone
// {r : M r <= 0}, under the normalization r_{(n-1)1,1} = 0.
struct Ray {
  RayFamily family = RayFamily::I;
  int sign = 0;                         // family I
  std::size_t k = 0, d = 0, z = 0;      // family II cell
  std::uint64_t mask = 0;               // families IV/V/VI subset parameter
  DualVector vec;
};

// 2 + (4n-1) + 1 + (2^{n-1}-1) + (2^n-2) + (2^{n-1}-1) = 2^{n+1} + 4n - 2.
inline std::uint64_t ray_count(std::size_t n) {
  return (std::uint64_t{1} << (n + 1)) + 4 * n - 2;
}

// Number of nontrivial sharp testable implications: 2^{n+1} - 4.
inline std::uint64_t sharp_inequality_count(std::size_t n) {
  return (std::uint64_t{1} << (n + 1)) - 4;
}

namespace detail {

inline Ray make_family_i(std::size_t n, int sign) {
  Ray r;
  r.family = RayFamily::I;
  r.sign = sign;
  r.vec = DualVector(n, 2);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t d = 0; d < 2; ++d) {
      r.vec.at(k, d, 1) = sign;
      r.vec.at(k, d, 0) = -sign;
    }
  return r;
}

inline Ray make_family_ii(std::size_t n, std::size_t k, std::size_t d, std::size_t z) {
  Ray r;
  r.family = RayFamily::II;
  r.k = k;
  r.d = d;
  r.z = z;
  r.vec = DualVector(n, 2);
  r.vec.at(k, d, z) = -1;
  return r;
}

inline Ray make_family_iii(std::size_t n) {
  Ray r;
  r.family = RayFamily::III;
  r.vec = DualVector(n, 2);
  for (std::size_t k = 0; k < n; ++k) {
    r.vec.at(k, 0, 0) = -1;
    r.vec.at(k, 1, 0) = -1;
    r.vec.at(k, 0, 1) = 1;
    r.vec.at(k, 1, 1) = k + 1 < n ? 1 : 0;
  }
  return r;
}

inline Ray make_family_iv(std::size_t n, std::uint64_t s) {
  Ray r;
  r.family = RayFamily::IV;
  r.mask = s;
  r.vec = DualVector(n, 2);
  for (std::size_t k = 0; k < n; ++k) {
    r.vec.at(k, 0, 1) = -1;
    const int rk10 = (k + 1 < n && ((s >> k) & 1u)) ? 1 : 0;
    r.vec.at(k, 1, 0) = rk10;
    r.vec.at(k, 1, 1) = -rk10;
  }
  return r;
}

inline Ray make_family_v(std::size_t n, std::uint64_t s) {
  Ray r;
  r.family = RayFamily::V;
  r.mask = s;
  r.vec = DualVector(n, 2);
  for (std::size_t k = 0; k < n; ++k) {
    r.vec.at(k, 1, 0) = -1;
    const int sk = (s >> k) & 1u ? 1 : 0;
    r.vec.at(k, 0, 1) = sk;
    r.vec.at(k, 0, 0) = -sk;
  }
  return r;
}

inline Ray make_family_vi(std::size_t n, std::uint64_t s) {
  Ray r;
  r.family = RayFamily::VI;
  r.mask = s;
  r.vec = DualVector(n, 2);
  for (std::size_t k = 0; k < n; ++k) {
    r.vec.at(k, 0, 0) = -1;
    const int rk11 = (k + 1 < n && ((s >> k) & 1u)) ? 1 : 0;
    r.vec.at(k, 1, 1) = rk11;
    r.vec.at(k, 1, 0) = -rk11;
  }
  return r;
}

}  // namespace detail

template <typename Fn>
void enumerate_rays(std::size_t n, Fn&& fn) {
  if (n < 2) throw ShapeMismatch("rays require n >= 2");
  fn(detail::make_family_i(n, 1));
  fn(detail::make_family_i(n, -1));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t z = 0; z < 2; ++z)
        if (!(k == n - 1 && d == 1 && z == 1)) fn(detail::make_family_ii(n, k, d, z));
  fn(detail::make_family_iii(n));
  const std::uint64_t half = std::uint64_t{1} << (n - 1), full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t s = 1; s < half; ++s) fn(detail::make_family_iv(n, s));
  for (std::uint64_t s = 1; s < full; ++s) fn(detail::make_family_v(n, s));
  for (std::uint64_t s = 1; s < half; ++s) fn(detail::make_family_vi(n, s));
}

// The three inequality families of the complete falsification test; families
// IV/V/VI generate (a)/(b)/(c) respectively.
enum class IneqFamily { A, B, C, Eq14 };

inline const char* ineq_family_name(IneqFamily f) {
  switch (f) {
    case IneqFamily::A: return "a";
    case IneqFamily::B: return "b";
    case IneqFamily::C: return "c";
    default: return "eq14";
  }
}

struct IvInequality {
  IneqFamily family = IneqFamily::A;
  std::uint64_t T = 0;  // subset parameter for families a/b/c
  // multival parameters (family eq14):
  std::size_t y_prime = 0, j_prime = 0;
  std::vector<std::size_t> j_seq;
  LinearExpr expr;  // raw form, expr <= 0, coefficients equal the ray entries
  Ray ray;

  std::string id() const {
    std::string s = "family ";
    s += ineq_family_name(family);
    if (family == IneqFamily::Eq14) {
      s += ", y'=" + std::to_string(y_prime) + ", j'=" + std::to_string(j_prime) + ", j=(";
      for (std::size_t i = 0; i < j_seq.size(); ++i)
        s += (i ? "," : "") + std::to_string(j_seq[i]);
      s += ")";
    } else {
      s += ", T={";
      bool first = true;
      for (std::size_t k = 0; k < 64; ++k)
        if ((T >> k) & 1u) {
          s += (first ? "" : ",") + std::to_string(k);
          first = false;
        }
      s += "}";
    }
    return s;
  }
};

namespace detail {

inline IvInequality ineq_from_ray(Ray ray, IneqFamily fam) {
  IvInequality q;
  q.family = fam;
  q.T = ray.mask;
  q.expr = LinearExpr(ray.vec.n, ray.vec.ell);
  q.expr.coeff = ray.vec.v;
  q.ray = std::move(ray);
  return q;
}

}  // namespace detail

// The sharp IV inequalities p^T r <= 0 over the nontrivial ray families:
//  (a) sum_k -p_{k0,1} + sum_{k in T} (p_{k1,0} - p_{k1,1}) <= 0, T subset of [n-1]
//  (b) sum_k -p_{k1,0} + sum_{k in T} (p_{k0,1} - p_{k0,0}) <= 0, T proper subset of [n]
//  (c) sum_k -p_{k0,0} + sum_{k in T} (p_{k1,1} - p_{k1,0}) <= 0, T subset of [n-1]
template <typename Fn>
void sharp_inequalities(std::size_t n, Fn&& fn) {
  if (n < 2) throw ShapeMismatch("inequalities require n >= 2");
  const std::uint64_t half = std::uint64_t{1} << (n - 1), full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t s = 1; s < half; ++s)
    fn(detail::ineq_from_ray(detail::make_family_iv(n, s), IneqFamily::A));
  for (std::uint64_t s = 1; s < full; ++s)
    fn(detail::ineq_from_ray(detail::make_family_v(n, s), IneqFamily::B));
  for (std::uint64_t s = 1; s < half; ++s)
    fn(detail::ineq_from_ray(detail::make_family_vi(n, s), IneqFamily::C));
}

inline std::vector<IvInequality> sharp_inequality_list(std::size_t n) {
  std::vector<IvInequality> out;
  sharp_inequalities(n, [&](IvInequality q) { out.push_back(std::move(q)); });
  return out;
}

// Compact form obtained by substituting the per-arm normalization, written as
// expr <= 0 with constant -1:
//  (a) sum_{k in T} p_{k1,0} + sum_{k not in T} p_{k1,1} <= 1, and cyclically.
inline LinearExpr reduced_form(const IvInequality& q) {
  const std::size_t n = q.expr.n;
  LinearExpr e(n, 2);
  e.constant = -1;
  for (std::size_t k = 0; k < n; ++k) {
    const bool in_t = (q.T >> k) & 1u;
    switch (q.family) {
      case IneqFamily::A:
        e.at(k, 1, in_t ? 0 : 1) = 1;
        break;
      case IneqFamily::B:
        e.at(k, 0, in_t ? 1 : 0) = 1;
        break;
      case IneqFamily::C:
        e.at(k, 1, in_t ? 1 : 0) = 1;
        break;
      case IneqFamily::Eq14:
        throw ShapeMismatch("no reduced form for the multival family");
    }
  }
  return e;
}

struct AxiomFailure {
  std::string description;
  Rational slack;  // positive violation magnitude
};

// The inequalities generated by ray families I-III, which every true observed
// law satisfies automatically: equal arm masses, nonnegativity of every cell
// except (n-1,1,1), and the combination covering that last cell.  Accepts raw
// arrays so that falsification candidates need not be valid laws.
inline std::vector<AxiomFailure> validate_axioms(const std::vector<Rational>& probs,
                                                 std::size_t n, std::size_t ell) {
  if (probs.size() != n * 2 * ell) throw ShapeMismatch("probability array has wrong shape");
  std::vector<AxiomFailure> fails;
  std::vector<Rational> arm(ell, Rational(0));
  for (std::size_t z = 0; z < ell; ++z)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t d = 0; d < 2; ++d) arm[z] += probs[ydz_index(y, d, z, ell)];

  if (ell == 2) {
    if (arm[1] > arm[0])
      fails.push_back({"arm mass: sum_z1 - sum_z0 <= 0", arm[1] - arm[0]});
    if (arm[0] > arm[1])
      fails.push_back({"arm mass: sum_z0 - sum_z1 <= 0", arm[0] - arm[1]});
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t d = 0; d < 2; ++d)
        for (std::size_t z = 0; z < 2; ++z) {
          if (y == n - 1 && d == 1 && z == 1) continue;
          const Rational& v = probs[ydz_index(y, d, z, ell)];
          if (v < 0)
            fails.push_back({"nonnegativity: p_{" + std::to_string(y) + std::to_string(d) + "," +
                                 std::to_string(z) + "} >= 0",
                             -v});
        }
    // Family III: arm-1 mass without the (n-1,1,1) cell stays below arm 0.
    const Rational lhs = arm[1] - probs[ydz_index(n - 1, 1, 1, ell)] - arm[0];
    if (lhs > 0) fails.push_back({"combination: sum_z1 - p_{(n-1)1,1} - sum_z0 <= 0", lhs});
  } else {
    for (std::size_t c = 0; c < probs.size(); ++c)
      if (probs[c] < 0) fails.push_back({"nonnegativity", -probs[c]});
    for (std::size_t z = 1; z < ell; ++z)
      if (arm[z] != arm[0])
        fails.push_back({"arm mass: arm " + std::to_string(z) + " differs from arm 0",
                         arm[z] > arm[0] ? arm[z] - arm[0] : arm[0] - arm[z]});
  }
  return fails;
}

struct Violation {
  IvInequality ineq;
  Rational slack;  // exact value of the left side, positive
};

struct FalsificationReport {
  bool falsified = false;
  // True when the test is complete (binary instrument): a compatible verdict
  // certifies a conforming full-data law exists.  For ell > 2 the families
  // tested are necessary only.
  bool complete = false;
  std::vector<Violation> violations;
  std::vector<AxiomFailure> axiom_failures;
};

// Complete falsification test for a binary instrument: evaluates every sharp
// inequality exactly.
inline FalsificationReport falsification_test(const ObservedLaw& law) {
  if (law.ell() != 2) throw UnsupportedInstrumentArity(law.ell());
  FalsificationReport rep;
  rep.complete = true;
  rep.axiom_failures = validate_axioms(law.values(), law.n(), 2);
  sharp_inequalities(law.n(), [&](IvInequality q) {
    const Rational v = q.expr.evaluate(law);
    if (v > 0) rep.violations.push_back({std::move(q), v});
  });
  rep.falsified = !rep.violations.empty() || !rep.axiom_failures.empty();
  return rep;
}

// A law that violates exactly the target inequality, produced by the oracle's
// separation program.  Its existence for every sharp inequality is what makes
// the family non-redundant.
inline ObservedLaw necessity_fixture(const IvInequality& target, std::size_t n) {
  std::vector<DualVector> others;
  sharp_inequalities(n, [&](const IvInequality& q) {
    if (q.family == target.family && q.T == target.T) return;
    others.push_back(q.ray.vec);
  });
  auto law = separating_distribution(target.ray.vec, others, n);
  if (!law) throw SeparationFailed("no strict separator for " + target.id());
  return *law;
}

}  // namespace ivb
