#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace ivb;
using ivbtest::rat;

namespace {

ObservedLaw degenerate_law() {
  // Point mass on (y=0, d=0) in both arms.
  std::vector<Rational> p(8, rat(0));
  p[ydz_index(0, 0, 0, 2)] = 1;
  p[ydz_index(0, 0, 1, 2)] = 1;
  return ObservedLaw(OutcomeSupport::iota(2), 2, p);
}

ObservedLaw uniform_law(std::size_t n) {
  std::vector<Rational> p(n * 4, Rational(1, static_cast<long>(2 * n)));
  return ObservedLaw(OutcomeSupport::iota(n), 2, p);
}

}  // namespace

TEST_CASE("observed law validation") {
  SECTION("degenerate point mass per arm is valid") {
    ObservedLaw law = degenerate_law();
    REQUIRE(law.p(0, 0, 0) == 1);
    REQUIRE(law.p(1, 1, 1) == 0);
  }
  SECTION("uniform arms are valid") { REQUIRE_NOTHROW(uniform_law(2)); }
  SECTION("arm mass 3/4 is rejected with the offending arm") {
    std::vector<Rational> p(8, rat(0));
    p[ydz_index(0, 0, 0, 2)] = Rational(3, 4);
    p[ydz_index(0, 0, 1, 2)] = 1;
    try {
      ObservedLaw law(OutcomeSupport::iota(2), 2, p);
      FAIL("expected ArmNotNormalized");
    } catch (const ArmNotNormalized& e) {
      REQUIRE(e.arm == 0);
    }
  }
  SECTION("negative entries are rejected") {
    std::vector<Rational> p(8, rat(0));
    p[ydz_index(0, 0, 0, 2)] = Rational(5, 4);
    p[ydz_index(1, 0, 0, 2)] = Rational(-1, 4);
    p[ydz_index(0, 0, 1, 2)] = 1;
    REQUIRE_THROWS_AS(ObservedLaw(OutcomeSupport::iota(2), 2, p), NegativeProbability);
  }
  SECTION("support needs two points and strict order") {
    REQUIRE_THROWS_AS(OutcomeSupport({rat(1)}), SupportTooSmall);
    REQUIRE_THROWS_AS(OutcomeSupport({rat(1), rat(1)}), SupportNotIncreasing);
    REQUIRE_THROWS_AS(OutcomeSupport({rat(2), rat(1)}), SupportNotIncreasing);
  }
}

TEST_CASE("conjugate law") {
  SECTION("swaps the treatment index") {
    ObservedLaw bar = degenerate_law().conjugate();
    REQUIRE(bar.p(0, 1, 0) == 1);
    REQUIRE(bar.p(0, 0, 0) == 0);
  }
  SECTION("is an involution") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      ObservedLaw law = marginalize(random_full_data_law(3, 2, seed));
      REQUIRE(law.conjugate().conjugate() == law);
    }
  }
  SECTION("uniform law is a fixed point") {
    ObservedLaw u = uniform_law(2);
    REQUIRE(u.conjugate() == u);
  }
}

TEST_CASE("ate evaluation") {
  const OutcomeSupport sup = OutcomeSupport::iota(2);
  SECTION("extreme shift: all mass on (i=0, j=n-1)") {
    std::vector<Rational> q(16, rat(0));
    q[0 * 4 + 0 * 2 + 1] = 1;  // block 0, i=0, j=1
    REQUIRE(ate_of(FullDataLaw(sup, 2, q)) == 1);
  }
  SECTION("diagonal support gives zero effect") {
    std::vector<Rational> q(16, rat(0));
    q[2 * 4 + 0] = Rational(1, 2);      // (i=0, j=0, block 2)
    q[1 * 4 + 1 * 2 + 1] = Rational(1, 2);  // (i=1, j=1, block 1)
    REQUIRE(ate_of(FullDataLaw(sup, 2, q)) == 0);
  }
  SECTION("uniform q cancels blockwise") {
    std::vector<Rational> q(16, Rational(1, 16));
    REQUIRE(ate_of(FullDataLaw(sup, 2, q)) == 0);
  }
  SECTION("swapping i and j negates the ate") {
    for (std::uint64_t seed : {5u, 6u}) {
      FullDataLaw q = random_full_data_law(3, 2, seed);
      const std::size_t n = 3;
      std::vector<Rational> sw(q.values().size());
      for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            sw[q.cell_index(j, i, b)] = q.q(i, j, b);
      REQUIRE(ate_of(FullDataLaw(q.support(), 2, sw)) == -ate_of(q));
    }
  }
}

TEST_CASE("marginalization") {
  const OutcomeSupport sup = OutcomeSupport::iota(2);
  SECTION("point mass at (0, 0, d=(0,0))") {
    std::vector<Rational> q(16, rat(0));
    q[0] = 1;
    ObservedLaw p = marginalize(FullDataLaw(sup, 2, q));
    REQUIRE(p.p(0, 0, 0) == 1);
    REQUIRE(p.p(0, 0, 1) == 1);
  }
  SECTION("point mass at (0, 1, d=(0,1))") {
    std::vector<Rational> q(16, rat(0));
    q[1 * 4 + 0 * 2 + 1] = 1;  // block 1 = (d0=0, d1=1), i=0, j=1
    ObservedLaw p = marginalize(FullDataLaw(sup, 2, q));
    REQUIRE(p.p(0, 0, 0) == 1);
    REQUIRE(p.p(1, 1, 1) == 1);
  }
  SECTION("uniform q induces uniform arms") {
    std::vector<Rational> q(16, Rational(1, 16));
    ObservedLaw p = marginalize(FullDataLaw(sup, 2, q));
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t d = 0; d < 2; ++d)
        for (std::size_t z = 0; z < 2; ++z) REQUIRE(p.p(y, d, z) == Rational(1, 4));
  }
  SECTION("marginalized laws satisfy the observed-law invariants") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      REQUIRE_NOTHROW(marginalize(random_full_data_law(3, 3, seed)));
  }
}

TEST_CASE("random instance generator") {
  SECTION("deterministic for a fixed seed") {
    FullDataLaw a = random_full_data_law(2, 2, 7), b = random_full_data_law(2, 2, 7);
    REQUIRE(a.values() == b.values());
  }
  SECTION("mass sums to one exactly") {
    for (std::uint64_t seed : {1u, 9u, 42u}) {
      Rational s = 0;
      for (const Rational& v : random_full_data_law(3, 2, seed).values()) s += v;
      REQUIRE(s == 1);
    }
  }
  SECTION("marginalized instances pass the falsification test") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto rep = falsification_test(marginalize(random_full_data_law(3, 2, seed)));
      REQUIRE_FALSE(rep.falsified);
    }
  }
}
