#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "test_helpers.hpp"

using namespace ivb;
using ivbtest::rat;

namespace {

// The 16 x 8 matrix for n = ell = 2, rows in (d-block, i, j) order and
// columns in (z, d, y) order.
constexpr int kGolden22[16][8] = {
    {1, 0, 0, 0, 1, 0, 0, 0},  // q_{00,00}
    {1, 0, 0, 0, 1, 0, 0, 0},  // q_{01,00}
    {0, 1, 0, 0, 0, 1, 0, 0},  // q_{10,00}
    {0, 1, 0, 0, 0, 1, 0, 0},  // q_{11,00}
    {1, 0, 0, 0, 0, 0, 1, 0},  // q_{00,01}
    {1, 0, 0, 0, 0, 0, 0, 1},  // q_{01,01}
    {0, 1, 0, 0, 0, 0, 1, 0},  // q_{10,01}
    {0, 1, 0, 0, 0, 0, 0, 1},  // q_{11,01}
    {0, 0, 1, 0, 1, 0, 0, 0},  // q_{00,10}
    {0, 0, 0, 1, 1, 0, 0, 0},  // q_{01,10}
    {0, 0, 1, 0, 0, 1, 0, 0},  // q_{10,10}
    {0, 0, 0, 1, 0, 1, 0, 0},  // q_{11,10}
    {0, 0, 1, 0, 0, 0, 1, 0},  // q_{00,11}
    {0, 0, 0, 1, 0, 0, 0, 1},  // q_{01,11}
    {0, 0, 1, 0, 0, 0, 1, 0},  // q_{10,11}
    {0, 0, 0, 1, 0, 0, 0, 1},  // q_{11,11}
};

}  // namespace

TEST_CASE("constraint matrix matches the reference listing for n = ell = 2") {
  ConstraintMatrix m(2, 2);
  REQUIRE(m.rows() == 16);
  REQUIRE(m.cols() == 8);
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 8; ++c) REQUIRE(int(m.entry(r, c)) == kGolden22[r][c]);
}

TEST_CASE("constraint matrix entry rule") {
  SECTION("every row has exactly ell ones") {
    for (auto [n, ell] : {std::pair<std::size_t, std::size_t>{3, 2}, {2, 3}, {3, 3}}) {
      ConstraintMatrix m(n, ell);
      for (std::size_t r = 0; r < m.rows(); ++r) {
        std::size_t ones = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) ones += m.entry(r, c);
        REQUIRE(ones == ell);
      }
    }
  }
  SECTION("n=2, ell=3 row (i=0, j=1, d=(0,1,0))") {
    ConstraintMatrix m(2, 3);
    REQUIRE(m.rows() == 32);
    REQUIRE(m.cols() == 12);
    const std::size_t block = 0b010;  // d0=0, d1=1, d2=0
    std::vector<std::size_t> cols;
    m.row_cols(m.encode_row(0, 1, block), cols);
    REQUIRE(cols == std::vector<std::size_t>{col_index(0, 0, 0, 2), col_index(1, 1, 1, 2),
                                             col_index(0, 0, 2, 2)});
  }
  SECTION("row cap") {
    REQUIRE_THROWS_AS(build_constraint_matrix(2, 2, 8), DimensionTooLarge);
  }
}

TEST_CASE("rank") {
  SECTION("rank of M is 4n-1 for a binary instrument") {
    for (std::size_t n = 2; n <= 8; ++n) REQUIRE(rank(ConstraintMatrix(n, 2)) == 4 * n - 1);
  }
  SECTION("zero matrix has rank zero") {
    std::vector<std::vector<Rational>> z(3, std::vector<Rational>(4, rat(0)));
    REQUIRE(rank(z) == 0);
  }
  SECTION("generic dense ranks") {
    std::vector<std::vector<Rational>> a = {{rat(1), rat(2)}, {rat(2), rat(4)}, {rat(0), rat(1)}};
    REQUIRE(rank(a) == 2);
    std::vector<std::vector<Rational>> b = {{Rational(1, 2), rat(1)}, {rat(1), rat(2)}};
    REQUIRE(rank(b) == 1);
  }
}

TEST_CASE("kernel basis") {
  SECTION("one-dimensional with the arm-sign pattern for ell = 2") {
    auto ker = kernel_basis(ConstraintMatrix(2, 2));
    REQUIRE(ker.size() == 1);
    REQUIRE(ker[0].in_col_order() ==
            std::vector<Rational>{rat(1), rat(1), rat(1), rat(1), rat(-1), rat(-1), rat(-1),
                                  rat(-1)});
    REQUIRE(kernel_basis(ConstraintMatrix(3, 2)).size() == 1);
  }
  SECTION("dimension 2 for n=2, ell=3, containing the arm shifts") {
    ConstraintMatrix m(2, 3);
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 2);
    for (const DualVector& k : ker)
      for (std::size_t r = 0; r < m.rows(); ++r) REQUIRE(row_dot(m, r, k) == 0);
    // add t to arm 0, subtract t from arm j
    for (std::size_t j = 1; j < 3; ++j) {
      DualVector shift(2, 3);
      for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t d = 0; d < 2; ++d) {
          shift.at(y, d, 0) = 1;
          shift.at(y, d, j) = -1;
        }
      REQUIRE(ivbtest::in_kernel(shift, ker));
    }
  }
  SECTION("kernel dimension is at least ell - 1, with all arm shifts inside") {
    for (auto [n, ell] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}, {2, 3}, {3, 3},
                          {3, 4}}) {
      ConstraintMatrix m(n, ell);
      auto ker = kernel_basis(m);
      REQUIRE(ker.size() >= ell - 1);
      REQUIRE(ker.size() + rank(m) == m.cols());
      for (std::size_t j = 1; j < ell; ++j) {
        DualVector shift(n, ell);
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t d = 0; d < 2; ++d) {
            shift.at(y, d, 0) = 1;
            shift.at(y, d, j) = -1;
          }
        REQUIRE(ivbtest::in_kernel(shift, ker));
      }
    }
  }
  SECTION("observed laws annihilate the kernel") {
    for (std::uint64_t seed : {1u, 2u}) {
      ObservedLaw law = marginalize(random_full_data_law(3, 2, seed));
      for (const DualVector& k : kernel_basis(ConstraintMatrix(3, 2))) {
        Rational dot = 0;
        for (std::size_t c = 0; c < k.v.size(); ++c) dot += k.v[c] * law.values()[c];
        REQUIRE(dot == 0);
      }
    }
  }
}

TEST_CASE("transpose relation: marginalize equals M^T q") {
  for (auto [n, ell] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3},
                        {4, 3}}) {
    ConstraintMatrix m(n, ell);
    FullDataLaw q = random_full_data_law(n, ell, 17 * n + ell);
    ObservedLaw p = marginalize(q);
    std::vector<Rational> mtq(m.cols(), rat(0));
    std::vector<std::size_t> cols;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      m.row_cols(r, cols);
      for (std::size_t c : cols) mtq[c] += q.values()[r];
    }
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t d = 0; d < 2; ++d)
        for (std::size_t z = 0; z < ell; ++z)
          REQUIRE(mtq[col_index(y, d, z, n)] == p.p(y, d, z));
  }
}

TEST_CASE("active sets and certification") {
  const OutcomeSupport sup = OutcomeSupport::iota(2);
  ConstraintMatrix m(2, 2);
  CostVector cost(sup, 2);

  SECTION("first reference vertex has active rank 7") {
    DualVector v = ivbtest::dual_from_col_order(
        2, 2, {rat(0), rat(-1), rat(-1), rat(1), rat(0), rat(-1), rat(0), rat(-1)});
    auto act = active_set(v, m, cost);
    REQUIRE(rank_of_rows(m, act) == 7);
    REQUIRE(certify_vertex(v, m, cost));
  }
  SECTION("the zero vector violates the negative-cost rows") {
    // Rows (i, j, d) with i > j have cost gamma_j - gamma_i < 0, so the
    // origin is never dual-feasible on a nondegenerate support.
    DualVector v(2, 2);
    REQUIRE_THROWS_AS(active_set(v, m, cost), Infeasible);
  }
  SECTION("a proper convex combination of two vertices is not a vertex") {
    std::vector<DualVector> vs;
    enumerate_vertices(sup, [&](const Signature&, const DualVector& v) { vs.push_back(v); });
    DualVector mid(2, 2);
    for (std::size_t c = 0; c < mid.v.size(); ++c)
      mid.v[c] = (vs[0].v[c] + vs[1].v[c]) / 2;
    REQUIRE_FALSE(certify_vertex(mid, m, cost));
  }
  SECTION("infeasible points are rejected with the violated row") {
    DualVector v(2, 2);
    v.at(0, 0, 0) = 10;
    REQUIRE_THROWS_AS(active_set(v, m, cost), Infeasible);
  }
  SECTION("kernel shifts preserve vertex certification") {
    enumerate_vertices(sup, [&](const Signature&, const DualVector& v) {
      DualVector shifted = v;
      const DualVector k = kernel_basis(m)[0];
      for (std::size_t c = 0; c < shifted.v.size(); ++c) shifted.v[c] += 3 * k.v[c];
      REQUIRE(certify_vertex(shifted, m, cost));
    });
  }
}

TEST_CASE("extreme ray certification") {
  ConstraintMatrix m(3, 2);
  SECTION("kernel vectors are (trivial) extreme rays") {
    REQUIRE(certify_extreme_ray(kernel_basis(m)[0], m));
  }
  SECTION("sums of two single-cell rays are not extreme") {
    DualVector r(3, 2);
    r.at(0, 0, 0) = -1;
    r.at(1, 0, 0) = -1;
    REQUIRE_FALSE(certify_extreme_ray(r, m));
  }
  SECTION("zero vector is rejected") {
    REQUIRE_THROWS_AS(certify_extreme_ray(DualVector(3, 2), m), ZeroVector);
  }
  SECTION("positive rows are rejected") {
    DualVector r(3, 2);
    r.at(0, 0, 0) = 1;
    REQUIRE_THROWS_AS(certify_extreme_ray(r, m), Infeasible);
  }
}
