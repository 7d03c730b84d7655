#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ivbounds/errors.hpp"
#include "ivbounds/rational.hpp"

namespace ivb {

// Sorted outcome support gamma_0 < ... < gamma_{n-1}, n >= 2.
class OutcomeSupport {
 public:
  explicit OutcomeSupport(std::vector<Rational> gammas) : gammas_(std::move(gammas)) {
    if (gammas_.size() < 2) throw SupportTooSmall(gammas_.size());
    for (std::size_t i = 1; i < gammas_.size(); ++i)
      if (!(gammas_[i - 1] < gammas_[i])) throw SupportNotIncreasing(i);
  }

  // Convenience support {0, 1, ..., n-1}.
  static OutcomeSupport iota(std::size_t n) {
    std::vector<Rational> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = Rational(static_cast<long>(i));
    return OutcomeSupport(std::move(g));
  }

  std::size_t size() const { return gammas_.size(); }
  const Rational& gamma(std::size_t i) const { return gammas_[i]; }
  const std::vector<Rational>& gammas() const { return gammas_; }

  friend bool operator==(const OutcomeSupport& a, const OutcomeSupport& b) {
    return a.gammas_ == b.gammas_;
  }

 private:
  std::vector<Rational> gammas_;
};

// Flat index helpers shared by observed-law and dual-vector storage.
// Storage order is (y, d, z); the display/matrix-column order is (z, d, y).
inline std::size_t ydz_index(std::size_t y, std::size_t d, std::size_t z, std::size_t ell) {
  return (y * 2 + d) * ell + z;
}
inline std::size_t col_index(std::size_t y, std::size_t d, std::size_t z, std::size_t n) {
  return z * 2 * n + d * n + y;
}

// The per-arm conditional distributions P(Y, D | Z=z): each arm sums to one.
class ObservedLaw {
 public:
  ObservedLaw(OutcomeSupport support, std::size_t ell, std::vector<Rational> probs)
      : support_(std::move(support)), ell_(ell), p_(std::move(probs)) {
    const std::size_t n = support_.size();
    if (ell_ < 2) throw ShapeMismatch("need at least two instrument arms");
    if (p_.size() != n * 2 * ell_)
      throw ShapeMismatch("probability array has wrong shape: expected n*2*ell entries");
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t d = 0; d < 2; ++d)
        for (std::size_t z = 0; z < ell_; ++z)
          if (p(y, d, z) < 0)
            throw NegativeProbability("p[y=" + std::to_string(y) + "][d=" + std::to_string(d) +
                                      "][z=" + std::to_string(z) + "]");
    for (std::size_t z = 0; z < ell_; ++z) {
      Rational s = 0;
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t d = 0; d < 2; ++d) s += p(y, d, z);
      if (s != 1) throw ArmNotNormalized(z, to_fraction_string(s));
    }
  }

  const OutcomeSupport& support() const { return support_; }
  std::size_t n() const { return support_.size(); }
  std::size_t ell() const { return ell_; }
  const Rational& p(std::size_t y, std::size_t d, std::size_t z) const {
    return p_[ydz_index(y, d, z, ell_)];
  }
  const std::vector<Rational>& values() const { return p_; }

  // Treatment-flipped law: pbar(y, d, z) = p(y, 1-d, z).
  ObservedLaw conjugate() const {
    std::vector<Rational> q(p_.size());
    for (std::size_t y = 0; y < n(); ++y)
      for (std::size_t d = 0; d < 2; ++d)
        for (std::size_t z = 0; z < ell_; ++z)
          q[ydz_index(y, d, z, ell_)] = p(y, 1 - d, z);
    return ObservedLaw(support_, ell_, std::move(q));
  }

  friend bool operator==(const ObservedLaw& a, const ObservedLaw& b) {
    return a.support_ == b.support_ && a.ell_ == b.ell_ && a.p_ == b.p_;
  }

 private:
  OutcomeSupport support_;
  std::size_t ell_;
  std::vector<Rational> p_;  // flat (y, d, z)
};

inline ObservedLaw new_observed_law(OutcomeSupport support, std::size_t ell,
                                    std::vector<Rational> probs) {
  return ObservedLaw(std::move(support), ell, std::move(probs));
}

// Number of treatment-response blocks 2^ell, and the block index of a response
// vector d = (d_0, ..., d_{ell-1}) read with d_0 as the most significant bit.
// That convention makes the q-cell order match the reference listing for
// n = ell = 2 exactly.
inline std::size_t d_block_count(std::size_t ell) { return std::size_t{1} << ell; }
inline bool d_bit(std::size_t block, std::size_t z, std::size_t ell) {
  return (block >> (ell - 1 - z)) & 1u;
}

// The joint law Q over (Y(0), Y(1), D(0..ell-1)), stored as q[i][j][d-block].
class FullDataLaw {
 public:
  FullDataLaw(OutcomeSupport support, std::size_t ell, std::vector<Rational> q)
      : support_(std::move(support)), ell_(ell), q_(std::move(q)) {
    const std::size_t n = support_.size();
    if (ell_ < 2) throw ShapeMismatch("need at least two instrument arms");
    if (q_.size() != n * n * d_block_count(ell_))
      throw ShapeMismatch("full-data array has wrong shape: expected n*n*2^ell entries");
    Rational s = 0;
    for (const Rational& v : q_) {
      if (v < 0) throw NegativeProbability("full-data cell");
      s += v;
    }
    if (s != 1) throw ShapeMismatch("full-data law must sum to 1, got " + to_fraction_string(s));
  }

  const OutcomeSupport& support() const { return support_; }
  std::size_t n() const { return support_.size(); }
  std::size_t ell() const { return ell_; }

  std::size_t cell_index(std::size_t i, std::size_t j, std::size_t block) const {
    const std::size_t n = support_.size();
    return block * n * n + i * n + j;
  }
  const Rational& q(std::size_t i, std::size_t j, std::size_t block) const {
    return q_[cell_index(i, j, block)];
  }
  const std::vector<Rational>& values() const { return q_; }

 private:
  OutcomeSupport support_;
  std::size_t ell_;
  std::vector<Rational> q_;  // flat (d-block, i, j)
};

// ATE = sum over cells of (gamma_j - gamma_i) q_{ij,d}.
inline Rational ate_of(const FullDataLaw& q) {
  const std::size_t n = q.n();
  Rational s = 0;
  for (std::size_t b = 0; b < d_block_count(q.ell()); ++b)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += (q.support().gamma(j) - q.support().gamma(i)) * q.q(i, j, b);
  return s;
}

// Induced observed law:
//   p_{y0,z} = sum_j sum_{d: d_z=0} q_{yj,d}
//   p_{y1,z} = sum_i sum_{d: d_z=1} q_{iy,d}
inline ObservedLaw marginalize(const FullDataLaw& q) {
  const std::size_t n = q.n(), ell = q.ell();
  std::vector<Rational> p(n * 2 * ell, Rational(0));
  for (std::size_t b = 0; b < d_block_count(ell); ++b)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& v = q.q(i, j, b);
        if (v == 0) continue;
        for (std::size_t z = 0; z < ell; ++z) {
          if (d_bit(b, z, ell))
            p[ydz_index(j, 1, z, ell)] += v;
          else
            p[ydz_index(i, 0, z, ell)] += v;
        }
      }
  return ObservedLaw(q.support(), ell, std::move(p));
}

// Seeded generator for exact random instances: integer weights in [0, 2^16),
// normalized by their sum. Deterministic for a fixed seed.
inline FullDataLaw random_full_data_law(std::size_t n, std::size_t ell, std::uint64_t seed,
                                        const OutcomeSupport* support = nullptr) {
  std::mt19937_64 eng(seed);
  const std::size_t cells = n * n * d_block_count(ell);
  std::vector<BigInt> w(cells);
  BigInt total = 0;
  do {
    total = 0;
    for (std::size_t c = 0; c < cells; ++c) {
      w[c] = static_cast<std::uint32_t>(eng() & 0xFFFFu);
      total += w[c];
    }
  } while (total == 0);
  std::vector<Rational> q(cells);
  for (std::size_t c = 0; c < cells; ++c) q[c] = Rational(w[c], total);
  return FullDataLaw(support ? *support : OutcomeSupport::iota(n), ell, std::move(q));
}

}  // namespace ivb
