#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "test_helpers.hpp"

using namespace ivb;
using ivbtest::rat;

TEST_CASE("multi-arm family counts") {
  SECTION("closed forms") {
    REQUIRE(count_multival_vertices(2, 3) == 0);
    REQUIRE(count_multival_vertices(3, 3) == 6);
    REQUIRE(count_multival_vertices(3, 4) == 24);
    REQUIRE(count_multival_inequalities(3, 3) == 36);
    REQUIRE(count_multival_inequalities(2, 3) == 6);
  }
  SECTION("enumeration lengths match the formulas for n, ell in {2,3,4}") {
    for (std::size_t n = 2; n <= 4; ++n)
      for (std::size_t ell = 2; ell <= 4; ++ell) {
        std::uint64_t vc = 0, ic = 0;
        enumerate_multival_vertices(OutcomeSupport::iota(n), ell,
                                    [&](const MultivalVertexParams&, const DualVector&) { ++vc; });
        enumerate_multival_inequalities(n, ell, [&](const IvInequality&) { ++ic; });
        REQUIRE(vc == count_multival_vertices(n, ell));
        REQUIRE(ic == count_multival_inequalities(n, ell));
      }
  }
}

TEST_CASE("multi-arm vertices certify under the general rank condition") {
  for (auto [n, ell] : {std::pair<std::size_t, std::size_t>{3, 3}, {2, 3}, {3, 4}}) {
    const OutcomeSupport sup = OutcomeSupport::iota(n);
    ConstraintMatrix m(n, ell);
    CostVector cost(sup, ell);
    std::size_t count = 0;
    enumerate_multival_vertices(sup, ell, [&](const MultivalVertexParams& prm, const DualVector& w) {
      ++count;
      REQUIRE(prm.s.size() == n - 1);
      for (std::size_t q : prm.s) REQUIRE(q != prm.a);
      REQUIRE(certify_vertex(w, m, cost));
    });
    REQUIRE(count == count_multival_vertices(n, ell));
  }
}

TEST_CASE("multi-arm vertices are pairwise M-distinct") {
  const OutcomeSupport sup = OutcomeSupport::iota(3);
  auto ker = kernel_basis(ConstraintMatrix(3, 3));
  std::vector<DualVector> ws;
  enumerate_multival_vertices(sup, 3,
                              [&](const MultivalVertexParams&, const DualVector& w) { ws.push_back(w); });
  REQUIRE(ws.size() == 6);
  for (std::size_t a = 0; a < ws.size(); ++a)
    for (std::size_t b = a + 1; b < ws.size(); ++b)
      REQUIRE_FALSE(ivbtest::in_kernel(ivbtest::diff(ws[a], ws[b]), ker));
}

TEST_CASE("multi-arm inequality rays certify as extreme") {
  for (auto [n, ell] : {std::pair<std::size_t, std::size_t>{3, 3}, {2, 3}, {3, 4}}) {
    ConstraintMatrix m(n, ell);
    enumerate_multival_inequalities(n, ell, [&](const IvInequality& q) {
      for (std::size_t row = 0; row < m.rows(); ++row) REQUIRE(row_dot(m, row, q.ray.vec) <= 0);
      REQUIRE(certify_extreme_ray(q.ray.vec, m));
    });
  }
}

TEST_CASE("multi-arm lower bound") {
  SECTION("empty family for n = 2 returns the empty marker") {
    ObservedLaw law = marginalize(random_full_data_law(2, 3, 1));
    REQUIRE_FALSE(multival_lower_bound(law).has_value());
  }
  SECTION("valid and dominated by the oracle lower bound") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      FullDataLaw q = random_full_data_law(3, 3, seed);
      ObservedLaw law = marginalize(q);
      auto lb = multival_lower_bound(law);
      REQUIRE(lb.has_value());
      REQUIRE(*lb <= ate_of(q));
      REQUIRE(*lb <= oracle_ate_bounds(law).first);
    }
  }
  SECTION("binary instruments are routed to the sharp module") {
    ObservedLaw law = marginalize(random_full_data_law(2, 2, 1));
    REQUIRE_THROWS_AS(multival_lower_bound(law), UnsupportedInstrumentArity);
  }
}

TEST_CASE("multi-arm falsification") {
  SECTION("marginalized laws are never flagged") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      FalsificationReport rep = multival_test(marginalize(random_full_data_law(3, 3, seed)));
      REQUIRE_FALSE(rep.falsified);
      REQUIRE_FALSE(rep.complete);
    }
  }
  SECTION("a violating law is flagged") {
    // Kill the right side of the inequality with y'=1, j'=0, j=(1,2,1):
    // put all arm-0 mass on p_{11,0} and arm-1/2 mass on cells outside it.
    const OutcomeSupport sup = OutcomeSupport::iota(3);
    std::vector<Rational> p(3 * 2 * 3, rat(0));
    p[ydz_index(1, 1, 0, 3)] = 1;
    p[ydz_index(0, 1, 1, 3)] = 1;
    p[ydz_index(0, 1, 2, 3)] = 1;
    FalsificationReport rep = multival_test(ObservedLaw(sup, 3, p));
    REQUIRE(rep.falsified);
    REQUIRE_FALSE(rep.violations.empty());
  }
  SECTION("binary input delegates to the complete test") {
    FalsificationReport rep = multival_test(marginalize(random_full_data_law(2, 2, 2)));
    REQUIRE(rep.complete);
  }
  SECTION("the exhibited family is implied by the sharp families when ell = 2") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      ObservedLaw law = marginalize(random_full_data_law(3, 2, seed));
      enumerate_multival_inequalities(3, 2, [&](const IvInequality& q) {
        REQUIRE(q.expr.evaluate(law) <= 0);
      });
    }
  }
}
