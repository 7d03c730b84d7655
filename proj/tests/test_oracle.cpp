#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace ivb;
using ivbtest::rat;

namespace {

ObservedLaw degenerate_law() {
  std::vector<Rational> p(8, rat(0));
  p[ydz_index(0, 0, 0, 2)] = 1;
  p[ydz_index(0, 0, 1, 2)] = 1;
  return ObservedLaw(OutcomeSupport::iota(2), 2, p);
}

ObservedLaw pearl_violator() {
  std::vector<Rational> p(8, rat(0));
  p[ydz_index(0, 1, 0, 2)] = 1;
  p[ydz_index(1, 1, 1, 2)] = 1;
  return ObservedLaw(OutcomeSupport::iota(2), 2, p);
}

}  // namespace

TEST_CASE("simplex basics") {
  SECTION("min x subject to x = 1") {
    LpInstance inst{{rat(1)}, {{rat(1)}}, {rat(1)}};
    LpResult res = solve_lp(inst, LpSense::minimize);
    REQUIRE(res.status == LpStatus::optimal);
    REQUIRE(*res.value == 1);
    REQUIRE((*res.solution)[0] == 1);
  }
  SECTION("x = -1 with x >= 0 is infeasible") {
    LpInstance inst{{rat(0)}, {{rat(1)}}, {rat(-1)}};
    REQUIRE(solve_lp(inst, LpSense::minimize).status == LpStatus::infeasible);
  }
  SECTION("max x1 - x2 subject to x1 + x2 = 1") {
    LpInstance inst{{rat(1), rat(-1)}, {{rat(1), rat(1)}}, {rat(1)}};
    LpResult res = solve_lp(inst, LpSense::maximize);
    REQUIRE(res.status == LpStatus::optimal);
    REQUIRE(*res.value == 1);
    REQUIRE(*res.solution == std::vector<Rational>{rat(1), rat(0)});
  }
  SECTION("unbounded direction is detected") {
    LpInstance inst{{rat(1), rat(0)}, {{rat(1), rat(-1)}}, {rat(0)}};
    REQUIRE(solve_lp(inst, LpSense::maximize).status == LpStatus::unbounded);
  }
  SECTION("re-solving is deterministic and exact") {
    LpInstance inst{{rat(2), rat(3), rat(-1)},
                    {{rat(1), rat(1), rat(1)}, {rat(1), rat(-1), rat(0)}},
                    {rat(1), Rational(1, 3)}};
    LpResult a = solve_lp(inst, LpSense::minimize), b = solve_lp(inst, LpSense::minimize);
    REQUIRE(a.status == LpStatus::optimal);
    REQUIRE(*a.value == *b.value);
    REQUIRE(*a.solution == *b.solution);
  }
  SECTION("dimension mismatches are rejected") {
    LpInstance bad{{rat(1)}, {{rat(1), rat(2)}}, {rat(1)}};
    REQUIRE_THROWS_AS(solve_lp(bad, LpSense::minimize), DimensionMismatch);
  }
}

TEST_CASE("oracle bounds on hand-checked laws") {
  auto deg = oracle_ate_bounds(degenerate_law());
  REQUIRE(deg.first == 0);
  REQUIRE(deg.second == 1);
  ObservedLaw uni(OutcomeSupport::iota(2), 2, std::vector<Rational>(8, Rational(1, 4)));
  auto u = oracle_ate_bounds(uni);
  REQUIRE(u.first == Rational(-1, 2));
  REQUIRE(u.second == Rational(1, 2));
  REQUIRE_THROWS_AS(oracle_ate_bounds(pearl_violator()), InfeasibleLaw);
}

TEST_CASE("feasibility oracle") {
  SECTION("marginalized laws are feasible") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ObservedLaw law = marginalize(random_full_data_law(3, 2, seed));
      REQUIRE(oracle_feasible(law.values(), 3, 2));
    }
  }
  SECTION("the violator is infeasible") {
    REQUIRE_FALSE(oracle_feasible(pearl_violator().values(), 2, 2));
  }
  SECTION("uniform law is feasible") {
    REQUIRE(oracle_feasible(std::vector<Rational>(8, Rational(1, 4)), 2, 2));
  }
  SECTION("phase-1 result is consistent with the bounds oracle") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      ObservedLaw law = marginalize(random_full_data_law(2, 2, 40 + seed));
      if (seed % 2 == 0) law = ivbtest::corrupt_law(law, seed);
      const bool feasible = oracle_feasible(law.values(), 2, 2);
      bool no_throw = true;
      try {
        oracle_ate_bounds(law);
      } catch (const InfeasibleLaw&) {
        no_throw = false;
      }
      REQUIRE(feasible == no_throw);
    }
  }
}

TEST_CASE("strong duality spot check") {
  for (std::size_t n : {2, 3}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      ObservedLaw law = marginalize(random_full_data_law(n, 2, 90 + seed));
      BoundResult b = ate_bounds(law);
      auto o = oracle_ate_bounds(law);
      REQUIRE(b.lower == o.first);
      REQUIRE(b.upper == o.second);
    }
  }
}

TEST_CASE("oracle size cap") {
  // 2^ell * n^2 primal variables must stay within the cap.
  ObservedLaw big = marginalize(random_full_data_law(17, 4, 1));
  REQUIRE_THROWS_AS(oracle_ate_bounds(big), OracleCapExceeded);
  // A five-outcome binary-instrument instance is comfortably inside.
  ObservedLaw ok = marginalize(random_full_data_law(5, 2, 1));
  REQUIRE_NOTHROW(oracle_ate_bounds(ok));
}

TEST_CASE("separating distributions isolate one inequality") {
  auto ineqs = sharp_inequality_list(2);
  const IvInequality* target = nullptr;
  for (const auto& q : ineqs)
    if (q.family == IneqFamily::A && q.T == 1) target = &q;
  REQUIRE(target != nullptr);
  std::vector<DualVector> others;
  for (const auto& q : ineqs)
    if (&q != target) others.push_back(q.ray.vec);
  auto law = separating_distribution(target->ray.vec, others, 2);
  REQUIRE(law.has_value());
  REQUIRE(target->expr.evaluate(*law) > 0);
  for (const auto& q : ineqs)
    if (&q != target) REQUIRE(q.expr.evaluate(*law) <= 0);
}
