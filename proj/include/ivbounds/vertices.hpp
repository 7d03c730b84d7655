#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "ivbounds/errors.hpp"
#include "ivbounds/linear_expr.hpp"
#include "ivbounds/lp_core.hpp"
#include "ivbounds/model.hpp"
#include "ivbounds/rational.hpp"
#include "ivbounds/signatures.hpp"

namespace ivb {

// Reconstructs the dual vertex u(B) of an admissible signature (binary
// instrument).  The base map sets, with alpha depending on the family,
//   u_{i00} = -gamma_i - alpha   if B_{i00} = 1, else gamma_0
//   u_{i10} =  gamma_i           if B_{i10} = 1, else -gamma_{n-1} - alpha
//   u_{i01} = -gamma_i           if B_{i01} = 1, else gamma_0 + alpha
//   u_{i11} =  gamma_i + alpha   if B_{i11} = 1, else -gamma_{n-1}
// and the S2/S3 representatives are shifted along the kernel direction
// (+s on arm 0, -s on arm 1, s = gamma_0 - gamma_{n-1}) so that the emitted
// vectors coincide with the reference listing for n = 2.
inline DualVector vertex_from_signature(const Signature& sig, const OutcomeSupport& support) {
  const std::size_t n = support.size();
  if (sig.n != n) throw ShapeMismatch("signature size does not match support");
  const Rational g0 = support.gamma(0), gl = support.gamma(n - 1);

  Rational alpha, shift;
  switch (sig.family) {
    case SignatureFamily::S1: {
      // Smallest index whose d=0 pair is all-ones.
      std::size_t t = 0;
      while (!(sig.bit(t, 0, 0) && sig.bit(t, 0, 1))) ++t;
      alpha = -g0 - support.gamma(t);
      shift = 0;
      break;
    }
    case SignatureFamily::S2:
      alpha = -g0 - gl;
      shift = g0 - gl;
      break;
    case SignatureFamily::S3: {
      // Largest index whose d=1 pair is all-ones.
      std::size_t t = n - 1;
      while (!(sig.bit(t, 1, 0) && sig.bit(t, 1, 1))) --t;
      alpha = -support.gamma(t) - gl;
      shift = g0 - gl;
      break;
    }
  }

  DualVector u(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational gi = support.gamma(i);
    u.at(i, 0, 0) = (sig.bit(i, 0, 0) ? Rational(-gi - alpha) : g0) + shift;
    u.at(i, 1, 0) = (sig.bit(i, 1, 0) ? gi : Rational(-gl - alpha)) + shift;
    u.at(i, 0, 1) = (sig.bit(i, 0, 1) ? Rational(-gi) : Rational(g0 + alpha)) - shift;
    u.at(i, 1, 1) = (sig.bit(i, 1, 1) ? Rational(gi + alpha) : Rational(-gl)) - shift;
  }
  return u;
}

template <typename Fn>
void enumerate_vertices(const OutcomeSupport& support, Fn&& fn) {
  for_each_signature(support.size(), [&](const Signature& sig) {
    fn(sig, vertex_from_signature(sig, support));
  });
}

struct BoundSide {
  Rational value;
  std::vector<Signature> witnesses;  // every exact argmax, no tie-breaking
};

struct BoundResult {
  Rational lower, upper;
  std::vector<Signature> lower_witnesses, upper_witnesses;
};

namespace detail {

// Scaled-integer evaluation of v(B)^T p over the signature stream.  gamma and
// p are cleared to a common integer grid once; each vertex dot product is then
// pure 64/128-bit arithmetic.  Falls back to rationals when entries are too
// large for the guards.
struct ScaledEvaluator {
  std::size_t n;
  std::vector<std::int64_t> g;         // gamma * Dg
  std::vector<std::int64_t> p;         // p * Dp, flat (y,d,z), ell = 2
  BigInt gden = 1, pden = 1;
  bool usable = false;

  ScaledEvaluator(const OutcomeSupport& support, const ObservedLaw& law) : n(support.size()) {
    constexpr std::int64_t kGuard = std::int64_t{1} << 40;
    BigInt dg = 1, dp = 1;
    for (const Rational& x : support.gammas()) dg = boost::multiprecision::lcm(dg, den(x));
    for (const Rational& x : law.values()) dp = boost::multiprecision::lcm(dp, den(x));
    gden = dg;
    pden = dp;
    g.resize(n);
    p.resize(law.values().size());
    for (std::size_t i = 0; i < n; ++i) {
      BigInt v = num(support.gamma(i)) * (dg / den(support.gamma(i)));
      if (v >= kGuard || v <= -kGuard) return;
      g[i] = v.convert_to<std::int64_t>();
    }
    for (std::size_t c = 0; c < p.size(); ++c) {
      const Rational& x = law.values()[c];
      BigInt v = num(x) * (dp / den(x));
      if (v >= kGuard || v <= -kGuard) return;
      p[c] = v.convert_to<std::int64_t>();
    }
    usable = true;
  }

  // Dot product scaled by gden * pden.
  __int128 dot(const Signature& sig) const {
    const std::int64_t g0 = g[0], gl = g[n - 1];
    std::int64_t alpha, shift;
    switch (sig.family) {
      case SignatureFamily::S1: {
        std::size_t t = 0;
        while (!(sig.bit(t, 0, 0) && sig.bit(t, 0, 1))) ++t;
        alpha = -g0 - g[t];
        shift = 0;
        break;
      }
      case SignatureFamily::S2:
        alpha = -g0 - gl;
        shift = g0 - gl;
        break;
      default: {
        std::size_t t = n - 1;
        while (!(sig.bit(t, 1, 0) && sig.bit(t, 1, 1))) --t;
        alpha = -g[t] - gl;
        shift = g0 - gl;
        break;
      }
    }
    __int128 acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t base = i * 4;  // flat (y,d,z) with ell = 2
      const std::int64_t gi = g[i];
      acc += (__int128)((sig.bit(i, 0, 0) ? -gi - alpha : g0) + shift) * p[base + 0];
      acc += (__int128)((sig.bit(i, 1, 0) ? gi : -gl - alpha) + shift) * p[base + 2];
      acc += (__int128)((sig.bit(i, 0, 1) ? -gi : g0 + alpha) - shift) * p[base + 1];
      acc += (__int128)((sig.bit(i, 1, 1) ? gi + alpha : -gl) - shift) * p[base + 3];
    }
    return acc;
  }

  Rational unscale(__int128 v) const {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
    BigInt b = static_cast<std::uint64_t>(u >> 64);
    b <<= 64;
    b += static_cast<std::uint64_t>(u);
    if (neg) b = -b;
    return Rational(b, gden * pden);
  }
};

inline BoundSide max_over_segments(const OutcomeSupport& support, const ObservedLaw& law,
                                   unsigned threads) {
  const std::size_t n = support.size();
  const auto segs = signature_segments(n);
  const ScaledEvaluator ev(support, law);

  struct Partial {
    bool any = false;
    __int128 best_i = 0;
    Rational best_r;
    std::vector<Signature> wits;
  };

  auto run_segment = [&](const SignatureSegment& seg, Partial& acc) {
    for_each_signature_in(n, seg, [&](const Signature& sig) {
      if (ev.usable) {
        const __int128 val = ev.dot(sig);
        if (!acc.any || val > acc.best_i) {
          acc.any = true;
          acc.best_i = val;
          acc.wits.assign(1, sig);
        } else if (val == acc.best_i) {
          acc.wits.push_back(sig);
        }
      } else {
        const DualVector v = vertex_from_signature(sig, support);
        Rational val = 0;
        for (std::size_t c = 0; c < v.v.size(); ++c)
          if (v.v[c] != 0) val += v.v[c] * law.values()[c];
        if (!acc.any || val > acc.best_r) {
          acc.any = true;
          acc.best_r = std::move(val);
          acc.wits.assign(1, sig);
        } else if (val == acc.best_r) {
          acc.wits.push_back(sig);
        }
      }
    });
  };

  std::vector<Partial> parts;
  if (threads <= 1) {
    parts.resize(1);
    for (const auto& seg : segs) run_segment(seg, parts[0]);
  } else {
    const unsigned nw = std::min<unsigned>(threads, std::thread::hardware_concurrency() > 0
                                                        ? 4 * std::thread::hardware_concurrency()
                                                        : threads);
    parts.resize(nw);
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nw; ++w)
      pool.emplace_back([&, w] {
        for (;;) {
          const std::size_t k = cursor.fetch_add(1);
          if (k >= segs.size()) break;
          run_segment(segs[k], parts[w]);
        }
      });
    for (auto& th : pool) th.join();
  }

  Partial merged;
  for (auto& p : parts) {
    if (!p.any) continue;
    const bool better =
        !merged.any || (ev.usable ? p.best_i > merged.best_i : p.best_r > merged.best_r);
    const bool equal =
        merged.any && (ev.usable ? p.best_i == merged.best_i : p.best_r == merged.best_r);
    if (better) {
      merged.any = true;
      merged.best_i = p.best_i;
      merged.best_r = p.best_r;
      merged.wits = std::move(p.wits);
    } else if (equal) {
      merged.wits.insert(merged.wits.end(), p.wits.begin(), p.wits.end());
    }
  }
  std::sort(merged.wits.begin(), merged.wits.end());

  BoundSide out;
  out.value = ev.usable ? ev.unscale(merged.best_i) : merged.best_r;
  out.witnesses = std::move(merged.wits);
  return out;
}

}  // namespace detail

// Sharp lower bound: max over the vertex family of v^T p, with every exact
// argmax reported.
inline BoundSide lower_bound(const ObservedLaw& law, unsigned threads = 1) {
  if (law.ell() != 2) throw UnsupportedInstrumentArity(law.ell());
  return detail::max_over_segments(law.support(), law, threads);
}

// Sharp two-sided bounds; the upper side is the negated lower bound of the
// treatment-flipped law.
inline BoundResult ate_bounds(const ObservedLaw& law, unsigned threads = 1) {
  if (law.ell() != 2) throw UnsupportedInstrumentArity(law.ell());
  BoundSide lo = lower_bound(law, threads);
  BoundSide up = lower_bound(law.conjugate(), threads);
  BoundResult out;
  out.lower = std::move(lo.value);
  out.upper = -up.value;
  out.lower_witnesses = std::move(lo.witnesses);
  out.upper_witnesses = std::move(up.witnesses);
  return out;
}

// Sharpness witness: the full-data law placing mass 1/u on each primal cell
// whose dual constraint is tight at v, and its marginalization.  At that law
// the given vertex is the unique argmax of the dual objective.
inline std::pair<FullDataLaw, ObservedLaw> witness_distribution(const DualVector& v,
                                                                const OutcomeSupport& support) {
  const ConstraintMatrix m(v.n, v.ell);
  const CostVector cost(support, v.ell);
  std::vector<std::size_t> act;
  try {
    act = active_set(v, m, cost);
  } catch (const Infeasible&) {
    throw NotAVertex();
  }
  if (rank_of_rows(m, act) != rank(m)) throw NotAVertex();
  std::vector<Rational> q(m.rows(), Rational(0));
  const Rational w(1, static_cast<long>(act.size()));
  for (std::size_t r : act) q[r] = w;
  FullDataLaw full(support, v.ell, std::move(q));
  ObservedLaw obs = marginalize(full);
  return {std::move(full), std::move(obs)};
}

// Rebuilds the signature of a vertex as the column-wise logical OR of its
// active rows in the mixed-response blocks (d with d_0 != d_1).  Inverse of
// vertex_from_signature on the enumerated family.
inline Signature signature_of_vertex(const DualVector& v, const OutcomeSupport& support) {
  if (v.ell != 2) throw UnsupportedInstrumentArity(v.ell);
  const ConstraintMatrix m(v.n, 2);
  const CostVector cost(support, 2);
  std::vector<int> bits(4 * v.n, 0);
  std::vector<std::size_t> cols;
  for (std::size_t r : active_set(v, m, cost)) {
    const auto id = m.decode_row(r);
    if (d_bit(id.block, 0, 2) == d_bit(id.block, 1, 2)) continue;
    m.row_cols(r, cols);
    for (std::size_t c : cols) {
      const std::size_t z = c / (2 * v.n), rem = c % (2 * v.n);
      bits[(rem % v.n) * 4 + (rem / v.n) * 2 + z] = 1;
    }
  }
  return classify(bits, v.n);
}

enum class BoundSideKind { Lower, Upper };

// One linear expression per vertex.  The lower side evaluates under max, the
// upper side under min; upper expressions apply -v through the treatment
// flip, i.e. coefficient (y,d,z) = -v(y,1-d,z).
inline std::vector<LinearExpr> emit_bound_expressions(const OutcomeSupport& support,
                                                      BoundSideKind side) {
  std::vector<LinearExpr> out;
  enumerate_vertices(support, [&](const Signature&, const DualVector& v) {
    LinearExpr e(v.n, v.ell);
    for (std::size_t y = 0; y < v.n; ++y)
      for (std::size_t d = 0; d < 2; ++d)
        for (std::size_t z = 0; z < v.ell; ++z)
          e.at(y, d, z) = side == BoundSideKind::Lower ? v.at(y, d, z) : -v.at(y, 1 - d, z);
    out.push_back(std::move(e));
  });
  return out;
}

}  // namespace ivb
