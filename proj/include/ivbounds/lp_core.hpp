#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <vector>

#include "ivbounds/errors.hpp"
#include "ivbounds/model.hpp"
#include "ivbounds/rational.hpp"

namespace ivb {

// A point of the dual space R^{2 n ell}, indexed by (y, d, z).
struct DualVector {
  std::size_t n = 0, ell = 0;
  std::vector<Rational> v;  // flat (y, d, z)

  DualVector() = default;
  DualVector(std::size_t n_, std::size_t ell_) : n(n_), ell(ell_), v(n_ * 2 * ell_, Rational(0)) {}

  Rational& at(std::size_t y, std::size_t d, std::size_t z) { return v[ydz_index(y, d, z, ell)]; }
  const Rational& at(std::size_t y, std::size_t d, std::size_t z) const {
    return v[ydz_index(y, d, z, ell)];
  }

  // Entries rearranged into matrix-column order (z outermost, then d, then y);
  // this is the order used in printed listings.
  std::vector<Rational> in_col_order() const {
    std::vector<Rational> out(v.size());
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t d = 0; d < 2; ++d)
        for (std::size_t z = 0; z < ell; ++z)
          out[col_index(y, d, z, n)] = at(y, d, z);
    return out;
  }

  bool is_zero() const {
    for (const Rational& x : v)
      if (x != 0) return false;
    return true;
  }

  friend bool operator==(const DualVector& a, const DualVector& b) {
    return a.n == b.n && a.ell == b.ell && a.v == b.v;
  }
};

// The 0/1 matrix M linking the full-data law q to the observed law p via
// M^T q = p.  Rows are indexed by q-cells (i, j, d) in the order
// (d-block, i, j); columns by p-cells in the order (z, d, y).  The row for
// (i, j, d) has one 1 per arm z: at column (i, 0, z) when d_z = 0 and at
// column (j, 1, z) when d_z = 1.
class ConstraintMatrix {
 public:
  static constexpr std::size_t kDefaultRowCap = std::size_t{1} << 24;

  ConstraintMatrix(std::size_t n, std::size_t ell, std::size_t row_cap = kDefaultRowCap)
      : n_(n), ell_(ell) {
    if (n < 2 || ell < 2) throw ShapeMismatch("constraint matrix needs n >= 2 and ell >= 2");
    if (ell >= 8 * sizeof(std::size_t) - 1) throw DimensionTooLarge(SIZE_MAX, row_cap);
    const std::size_t r = n * n * d_block_count(ell);
    if (r > row_cap) throw DimensionTooLarge(r, row_cap);
    rows_ = r;
  }

  std::size_t n() const { return n_; }
  std::size_t ell() const { return ell_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return 2 * n_ * ell_; }

  struct RowId {
    std::size_t i, j, block;
  };
  RowId decode_row(std::size_t r) const {
    const std::size_t block = r / (n_ * n_), rem = r % (n_ * n_);
    return {rem / n_, rem % n_, block};
  }
  std::size_t encode_row(std::size_t i, std::size_t j, std::size_t block) const {
    return block * n_ * n_ + i * n_ + j;
  }

  // Column indices of the ell ones in row r, in arm order.
  void row_cols(std::size_t r, std::vector<std::size_t>& out) const {
    const RowId id = decode_row(r);
    out.clear();
    for (std::size_t z = 0; z < ell_; ++z)
      out.push_back(d_bit(id.block, z, ell_) ? col_index(id.j, 1, z, n_)
                                             : col_index(id.i, 0, z, n_));
  }

  bool entry(std::size_t r, std::size_t c) const {
    const RowId id = decode_row(r);
    const std::size_t z = c / (2 * n_), rem = c % (2 * n_);
    const std::size_t d = rem / n_, y = rem % n_;
    if (d == 0) return y == id.i && !d_bit(id.block, z, ell_);
    return y == id.j && d_bit(id.block, z, ell_);
  }

  std::vector<std::vector<Rational>> dense() const {
    std::vector<std::vector<Rational>> m(rows_, std::vector<Rational>(cols(), Rational(0)));
    std::vector<std::size_t> cols_of_row;
    for (std::size_t r = 0; r < rows_; ++r) {
      row_cols(r, cols_of_row);
      for (std::size_t c : cols_of_row) m[r][c] = 1;
    }
    return m;
  }

 private:
  std::size_t n_, ell_, rows_;
};

inline ConstraintMatrix build_constraint_matrix(
    std::size_t n, std::size_t ell, std::size_t row_cap = ConstraintMatrix::kDefaultRowCap) {
  return ConstraintMatrix(n, ell, row_cap);
}

// Cost vector entry c_{ij,d} = gamma_j - gamma_i (independent of d).
class CostVector {
 public:
  CostVector(const OutcomeSupport& support, std::size_t ell)
      : support_(&support), ell_(ell) {}

  Rational of_cell(std::size_t i, std::size_t j) const {
    return support_->gamma(j) - support_->gamma(i);
  }
  Rational operator()(const ConstraintMatrix& m, std::size_t row) const {
    const auto id = m.decode_row(row);
    return of_cell(id.i, id.j);
  }
  std::size_t ell() const { return ell_; }
  const OutcomeSupport& support() const { return *support_; }

 private:
  const OutcomeSupport* support_;
  std::size_t ell_;
};

namespace detail {

// Incremental row-space basis over the rationals.  Rows are inserted one at a
// time; rank() is the number retained.  Pivots are chosen as the leftmost
// nonzero entry after reduction, which keeps values small for 0/1 inputs.
class RationalRowBasis {
 public:
  explicit RationalRowBasis(std::size_t width) : width_(width) {}

  // Returns true when the row was linearly independent of the basis.
  bool insert(std::vector<Rational> row) {
    reduce(row);
    std::size_t lead = width_;
    for (std::size_t c = 0; c < width_; ++c)
      if (row[c] != 0) {
        lead = c;
        break;
      }
    if (lead == width_) return false;
    const Rational inv = row[lead];
    for (std::size_t c = lead; c < width_; ++c) row[c] /= inv;
    rows_.push_back(std::move(row));
    leads_.push_back(lead);
    return true;
  }

  void reduce(std::vector<Rational>& row) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Rational f = row[leads_[k]];
      if (f == 0) continue;
      for (std::size_t c = leads_[k]; c < width_; ++c) row[c] -= f * rows_[k][c];
    }
  }

  std::size_t rank() const { return rows_.size(); }
  std::size_t width() const { return width_; }
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }
  const std::vector<std::size_t>& leads() const { return leads_; }

 private:
  std::size_t width_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> leads_;
};

// Integer fast path for rank computation.  Rows are kept gcd-normalized, all
// products are taken in 128-bit; on any risk of overflow the caller falls
// back to the rational basis.
class Int64RowBasis {
 public:
  explicit Int64RowBasis(std::size_t width) : width_(width) {}

  std::optional<bool> insert(std::vector<std::int64_t> row) {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::int64_t f = row[leads_[k]];
      if (f == 0) continue;
      const std::int64_t lead = rows_[k][leads_[k]];
      for (std::size_t c = 0; c < width_; ++c) {
        const __int128 x = (__int128)row[c] * lead - (__int128)rows_[k][c] * f;
        if (x > kLimit || x < -kLimit) return std::nullopt;
        row[c] = static_cast<std::int64_t>(x);
      }
      normalize(row);
    }
    std::size_t lead = width_;
    for (std::size_t c = 0; c < width_; ++c)
      if (row[c] != 0) {
        lead = c;
        break;
      }
    if (lead == width_) return false;
    normalize(row);
    rows_.push_back(std::move(row));
    leads_.push_back(lead);
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  static constexpr __int128 kLimit = (__int128)1 << 62;

  void normalize(std::vector<std::int64_t>& row) const {
    std::int64_t g = 0;
    for (std::int64_t x : row) g = std::gcd(g, x < 0 ? -x : x);
    if (g > 1)
      for (std::int64_t& x : row) x /= g;
  }

  std::size_t width_;
  std::vector<std::vector<std::int64_t>> rows_;
  std::vector<std::size_t> leads_;
};

}  // namespace detail

// Exact rank of a dense rational matrix.
inline std::size_t rank(const std::vector<std::vector<Rational>>& m) {
  if (m.empty()) return 0;
  detail::RationalRowBasis basis(m[0].size());
  for (const auto& row : m) basis.insert(row);
  return basis.rank();
}

// Rank of a set of rows of M, identified by row index.  The rows are 0/1, so
// the integer fast path almost always applies.
inline std::size_t rank_of_rows(const ConstraintMatrix& m, const std::vector<std::size_t>& rows) {
  const std::size_t w = m.cols();
  detail::Int64RowBasis fast(w);
  std::vector<std::size_t> cols_of_row;
  bool ok = true;
  for (std::size_t r : rows) {
    std::vector<std::int64_t> row(w, 0);
    m.row_cols(r, cols_of_row);
    for (std::size_t c : cols_of_row) row[c] = 1;
    if (!fast.insert(std::move(row)).has_value()) {
      ok = false;
      break;
    }
    if (fast.rank() == w) return w;
  }
  if (ok) return fast.rank();
  detail::RationalRowBasis basis(w);
  for (std::size_t r : rows) {
    std::vector<Rational> row(w, Rational(0));
    m.row_cols(r, cols_of_row);
    for (std::size_t c : cols_of_row) row[c] = 1;
    basis.insert(std::move(row));
  }
  return basis.rank();
}

inline std::size_t rank(const ConstraintMatrix& m) {
  std::vector<std::size_t> all(m.rows());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
  return rank_of_rows(m, all);
}

// Basis of ker(M), returned as dual vectors with integer primitive entries
// and positive leading coordinate (in column order).  For ell = 2 this is the
// single vector with +1 on arm 0 and -1 on arm 1; for general ell it contains
// the arm-shift directions.
inline std::vector<DualVector> kernel_basis(const ConstraintMatrix& m) {
  const std::size_t w = m.cols();
  detail::RationalRowBasis basis(w);
  std::vector<std::size_t> cols_of_row;
  for (std::size_t r = 0; r < m.rows() && basis.rank() < w; ++r) {
    std::vector<Rational> row(w, Rational(0));
    m.row_cols(r, cols_of_row);
    for (std::size_t c : cols_of_row) row[c] = 1;
    basis.insert(std::move(row));
  }
  // Back-substitute to reduced echelon form.
  auto rows = basis.rows();
  auto leads = basis.leads();
  std::vector<std::size_t> order(rows.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return leads[a] < leads[b]; });
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Rational f = rows[order[a]][leads[order[b]]];
      if (f == 0) continue;
      for (std::size_t c = 0; c < w; ++c) rows[order[a]][c] -= f * rows[order[b]][c];
    }
  std::vector<bool> is_pivot(w, false);
  for (std::size_t l : leads) is_pivot[l] = true;

  std::vector<DualVector> out;
  for (std::size_t free_col = 0; free_col < w; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<Rational> x(w, Rational(0));
    x[free_col] = 1;
    for (std::size_t k = 0; k < rows.size(); ++k) x[leads[k]] = -rows[k][free_col];
    // Clear denominators, divide by content, make the first nonzero positive.
    BigInt mult = 1;
    for (const Rational& c : x) mult = boost::multiprecision::lcm(mult, den(c));
    std::vector<BigInt> xi(w);
    BigInt g = 0;
    for (std::size_t c = 0; c < w; ++c) {
      xi[c] = num(x[c]) * (mult / den(x[c]));
      g = boost::multiprecision::gcd(g, xi[c]);
    }
    if (g > 1)
      for (BigInt& c : xi) c /= g;
    for (std::size_t c = 0; c < w; ++c)
      if (xi[c] != 0) {
        if (xi[c] < 0)
          for (BigInt& e : xi) e = -e;
        break;
      }
    DualVector kv(m.n(), m.ell());
    for (std::size_t y = 0; y < m.n(); ++y)
      for (std::size_t d = 0; d < 2; ++d)
        for (std::size_t z = 0; z < m.ell(); ++z)
          kv.at(y, d, z) = Rational(xi[col_index(y, d, z, m.n())]);
    out.push_back(std::move(kv));
  }
  return out;
}

// Value of row r of M applied to a dual vector.
inline Rational row_dot(const ConstraintMatrix& m, std::size_t r, const DualVector& v) {
  const auto id = m.decode_row(r);
  Rational s = 0;
  for (std::size_t z = 0; z < m.ell(); ++z)
    s += d_bit(id.block, z, m.ell()) ? v.at(id.j, 1, z) : v.at(id.i, 0, z);
  return s;
}

// Rows where M v equals the cost exactly.  Throws Infeasible on the first
// violated row.
inline std::vector<std::size_t> active_set(const DualVector& v, const ConstraintMatrix& m,
                                           const CostVector& cost) {
  std::vector<std::size_t> act;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const Rational lhs = row_dot(m, r, v);
    const Rational rhs = cost(m, r);
    if (lhs > rhs) throw Infeasible(r);
    if (lhs == rhs) act.push_back(r);
  }
  return act;
}

// A feasible point is a vertex iff its active rows reach the rank of M.
inline bool certify_vertex(const DualVector& v, const ConstraintMatrix& m,
                           const CostVector& cost) {
  return rank_of_rows(m, active_set(v, m, cost)) == rank(m);
}

// Rows of the cone M r <= 0 that are tight at r.
inline std::vector<std::size_t> tight_set(const DualVector& r, const ConstraintMatrix& m) {
  std::vector<std::size_t> act;
  for (std::size_t row = 0; row < m.rows(); ++row) {
    const Rational lhs = row_dot(m, row, r);
    if (lhs > 0) throw Infeasible(row);
    if (lhs == 0) act.push_back(row);
  }
  return act;
}

// A nonzero feasible direction is an extreme ray iff its tight rows reach
// rank(M) - 1.
inline bool certify_extreme_ray(const DualVector& r, const ConstraintMatrix& m) {
  if (r.is_zero()) throw ZeroVector();
  return rank_of_rows(m, tight_set(r, m)) + 1 >= rank(m);
}

}  // namespace ivb
