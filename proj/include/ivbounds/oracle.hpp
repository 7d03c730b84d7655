#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ivbounds/errors.hpp"
#include "ivbounds/lp_core.hpp"
#include "ivbounds/model.hpp"
#include "ivbounds/rational.hpp"

namespace ivb {

// Equality-form linear program: optimize objective^T x subject to
// eq_matrix x = eq_rhs, x >= 0.
struct LpInstance {
  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> eq_matrix;
  std::vector<Rational> eq_rhs;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::optional<Rational> value;
  std::optional<std::vector<Rational>> solution;
};

enum class LpSense { minimize, maximize };

namespace detail {

// Dense rational simplex tableau with Bland's anti-cycling rule.
class SimplexTableau {
 public:
  SimplexTableau(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b)
      : m_(a.size()), nv_(a.empty() ? 0 : a[0].size()), ncols_(nv_ + m_ + 1) {
    t_.assign(m_, std::vector<Rational>(ncols_, Rational(0)));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = b[i] < 0;
      for (std::size_t j = 0; j < nv_; ++j) t_[i][j] = flip ? -a[i][j] : a[i][j];
      t_[i][nv_ + i] = 1;  // artificial
      t_[i][ncols_ - 1] = flip ? -b[i] : b[i];
      basis_[i] = nv_ + i;
    }
  }

  // Minimizes the sum of artificials; returns that minimum.
  Rational phase1() {
    std::vector<Rational> cost(ncols_ - 1, Rational(0));
    for (std::size_t j = nv_; j + 1 < ncols_; ++j) cost[j] = 1;
    run(cost, nv_ + m_);
    Rational infeas = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= nv_) infeas += t_[i][ncols_ - 1];
    // Pivot remaining zero-valued artificials out, drop redundant rows.
    if (infeas == 0) {
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] < nv_) continue;
        std::size_t e = nv_;
        for (std::size_t j = 0; j < nv_; ++j)
          if (t_[i][j] != 0) {
            e = j;
            break;
          }
        if (e < nv_) pivot(i, e);
      }
      std::vector<std::vector<Rational>> keep_rows;
      std::vector<std::size_t> keep_basis;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] < nv_) {
          keep_rows.push_back(std::move(t_[i]));
          keep_basis.push_back(basis_[i]);
        }
      t_ = std::move(keep_rows);
      basis_ = std::move(keep_basis);
      m_ = t_.size();
    }
    return infeas;
  }

  // Minimizes c^T x from the current feasible basis.  Returns false when the
  // program is unbounded below.
  bool phase2(const std::vector<Rational>& c) {
    std::vector<Rational> cost(ncols_ - 1, Rational(0));
    for (std::size_t j = 0; j < nv_; ++j) cost[j] = c[j];
    return run(cost, nv_);
  }

  Rational objective_value(const std::vector<Rational>& c) const {
    Rational s = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < nv_) s += c[basis_[i]] * t_[i][ncols_ - 1];
    return s;
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(nv_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < nv_) x[basis_[i]] = t_[i][ncols_ - 1];
    return x;
  }

 private:
  // Returns false on unboundedness.  Only columns < limit may enter.
  bool run(const std::vector<Rational>& cost, std::size_t limit) {
    std::vector<Rational> red(ncols_ - 1);
    for (;;) {
      // Reduced costs: red = cost - cost_B B^{-1} A, recomputed per iteration;
      // instance sizes are small enough that clarity wins over updates.
      for (std::size_t j = 0; j + 1 < ncols_; ++j) red[j] = cost[j];
      for (std::size_t i = 0; i < m_; ++i) {
        const Rational cb = cost[basis_[i]];
        if (cb == 0) continue;
        for (std::size_t j = 0; j + 1 < ncols_; ++j)
          if (t_[i][j] != 0) red[j] -= cb * t_[i][j];
      }
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (red[j] < 0) {
          enter = j;
          break;
        }
      if (enter == limit) return true;  // optimal
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = t_[i][ncols_ - 1] / t_[i][enter];
        if (leave == m_ || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const Rational inv = t_[row][col];
    for (auto& x : t_[row]) x /= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const Rational f = t_[i][col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < ncols_; ++j)
        if (t_[row][j] != 0) t_[i][j] -= f * t_[row][j];
    }
    basis_[row] = col;
  }

  std::size_t m_, nv_, ncols_;
  std::vector<std::vector<Rational>> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// Exact two-phase simplex.  Deterministic: Bland's rule for entering and
// leaving variables.
inline LpResult solve_lp(const LpInstance& inst, LpSense sense) {
  const std::size_t m = inst.eq_matrix.size();
  const std::size_t nv = inst.objective.size();
  if (inst.eq_rhs.size() != m) throw DimensionMismatch("rhs length does not match row count");
  for (const auto& row : inst.eq_matrix)
    if (row.size() != nv) throw DimensionMismatch("matrix row length does not match objective");

  detail::SimplexTableau tab(inst.eq_matrix, inst.eq_rhs);
  LpResult res;
  if (tab.phase1() != 0) {
    res.status = LpStatus::infeasible;
    return res;
  }
  std::vector<Rational> c = inst.objective;
  if (sense == LpSense::maximize)
    for (Rational& x : c) x = -x;
  if (!tab.phase2(c)) {
    res.status = LpStatus::unbounded;
    return res;
  }
  res.status = LpStatus::optimal;
  Rational v = tab.objective_value(c);
  res.value = sense == LpSense::maximize ? -v : v;
  res.solution = tab.solution();
  return res;
}

constexpr std::size_t kOracleVarCap = 4096;

namespace detail {

// Transposed constraint system: one equality row per observed cell, one
// variable per full-data cell.
inline LpInstance primal_instance(const ObservedLaw& law) {
  const std::size_t n = law.n(), ell = law.ell();
  const ConstraintMatrix m(n, ell);
  const std::size_t nv = m.rows();
  if (nv > kOracleVarCap) throw OracleCapExceeded(nv, kOracleVarCap);
  LpInstance inst;
  inst.objective.assign(nv, Rational(0));
  for (std::size_t r = 0; r < nv; ++r) {
    const auto id = m.decode_row(r);
    inst.objective[r] = law.support().gamma(id.j) - law.support().gamma(id.i);
  }
  inst.eq_matrix.assign(m.cols(), std::vector<Rational>(nv, Rational(0)));
  std::vector<std::size_t> cols;
  for (std::size_t r = 0; r < nv; ++r) {
    m.row_cols(r, cols);
    for (std::size_t c : cols) inst.eq_matrix[c][r] = 1;
  }
  inst.eq_rhs.assign(m.cols(), Rational(0));
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t z = 0; z < ell; ++z)
        inst.eq_rhs[col_index(y, d, z, n)] = law.p(y, d, z);
  return inst;
}

}  // namespace detail

// Ground-truth ATE bounds: (min, max) of c^T q over {q >= 0 : M^T q = p}.
inline std::pair<Rational, Rational> oracle_ate_bounds(const ObservedLaw& law) {
  const LpInstance inst = detail::primal_instance(law);
  const LpResult lo = solve_lp(inst, LpSense::minimize);
  if (lo.status == LpStatus::infeasible) throw InfeasibleLaw();
  const LpResult hi = solve_lp(inst, LpSense::maximize);
  return {*lo.value, *hi.value};
}

// Feasibility of M^T q = p, q >= 0 for a raw nonnegative array (flat (y,d,z)).
inline bool oracle_feasible(const std::vector<Rational>& probs, std::size_t n, std::size_t ell) {
  const ConstraintMatrix m(n, ell);
  if (probs.size() != m.cols()) throw DimensionMismatch("probability array has wrong length");
  if (m.rows() > kOracleVarCap) throw OracleCapExceeded(m.rows(), kOracleVarCap);
  LpInstance inst;
  inst.objective.assign(m.rows(), Rational(0));
  inst.eq_matrix.assign(m.cols(), std::vector<Rational>(m.rows(), Rational(0)));
  std::vector<std::size_t> cols;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    m.row_cols(r, cols);
    for (std::size_t c : cols) inst.eq_matrix[c][r] = 1;
  }
  inst.eq_rhs.assign(m.cols(), Rational(0));
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t z = 0; z < ell; ++z)
        inst.eq_rhs[col_index(y, d, z, n)] = probs[ydz_index(y, d, z, ell)];
  return solve_lp(inst, LpSense::minimize).status != LpStatus::infeasible;
}

// Separation program for necessity fixtures: finds an arm-normalized
// nonnegative vector p with p^T target > 0 and p^T r <= 0 for every other
// given ray.  Strict positivity is certified exactly; returns nullopt when
// the optimum is not strictly positive.
inline std::optional<ObservedLaw> separating_distribution(const DualVector& target,
                                                          const std::vector<DualVector>& others,
                                                          std::size_t n) {
  const std::size_t ell = target.ell;
  const std::size_t np = 2 * n * ell, ns = others.size();
  LpInstance inst;
  inst.objective.assign(np + ns, Rational(0));
  for (std::size_t c = 0; c < np; ++c) inst.objective[c] = target.v[c];

  // Arm totals fix the l1 normalization at one per arm.
  for (std::size_t z = 0; z < ell; ++z) {
    std::vector<Rational> row(np + ns, Rational(0));
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t d = 0; d < 2; ++d) row[ydz_index(y, d, z, ell)] = 1;
    inst.eq_matrix.push_back(std::move(row));
    inst.eq_rhs.push_back(1);
  }
  for (std::size_t k = 0; k < ns; ++k) {
    std::vector<Rational> row(np + ns, Rational(0));
    for (std::size_t c = 0; c < np; ++c) row[c] = others[k].v[c];
    row[np + k] = 1;  // slack: p^T r + slack = 0
    inst.eq_matrix.push_back(std::move(row));
    inst.eq_rhs.push_back(0);
  }

  const LpResult res = solve_lp(inst, LpSense::maximize);
  if (res.status != LpStatus::optimal || *res.value <= 0) return std::nullopt;
  std::vector<Rational> p(res.solution->begin(), res.solution->begin() + np);
  return ObservedLaw(OutcomeSupport::iota(n), ell, std::move(p));
}

}  // namespace ivb
