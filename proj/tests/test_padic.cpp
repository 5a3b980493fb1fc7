#include <catch2/catch_amalgamated.hpp>

#include <narayana/interval.hpp>
#include <narayana/padic.hpp>

#include <limits>

using namespace narayana;

TEST_CASE("valuation type: ordering, addition, printing") {
  valuation two(2), five(5);
  valuation inf = valuation::infinity();
  CHECK(two < five);
  CHECK(five < inf);
  CHECK(inf == valuation::infinity());
  CHECK((two + five) == valuation(7));
  CHECK((two + inf).is_infinite());
  CHECK((inf + inf).is_infinite());
  CHECK(two.finite() == 2);
  CHECK_THROWS_AS(inf.finite(), std::logic_error);
  CHECK(two.str() == "2");
  CHECK(inf.str() == "inf");
}

TEST_CASE("machine-word valuations") {
  CHECK(vp(std::int64_t(0), 3).is_infinite());
  CHECK(vp(std::int64_t(2745), 3) == valuation(2));
  CHECK(vp(std::int64_t(-27), 3) == valuation(3));
  CHECK(vp(std::int64_t(1), 2) == valuation(0));
  CHECK(vp(std::int64_t(1024), 2) == valuation(10));
  CHECK(vp(std::numeric_limits<std::int64_t>::min(), 2) == valuation(63));
  CHECK_THROWS_AS(vp(std::int64_t(12), 4), std::invalid_argument);
  CHECK_THROWS_AS(vp(std::int64_t(12), 1), std::invalid_argument);
  CHECK_THROWS_AS(vp(std::int64_t(12), 0), std::invalid_argument);
}

TEST_CASE("big-integer valuations, including huge exact powers") {
  CHECK(vp(bigint(0), 3).is_infinite());
  CHECK(vp(bigint(2745), 3) == valuation(2));
  CHECK(vp(bigint(-2745), 3) == valuation(2));
  bigint x = pow3_big(500) * 7;
  CHECK(vp(x, 3) == valuation(500));
  CHECK(vp(-x, 3) == valuation(500));
  bigint y = boost::multiprecision::pow(bigint(2), 321) * 3;
  CHECK(vp(y, 2) == valuation(321));
  CHECK(vp(bigint(1), 5) == valuation(0));
}

TEST_CASE("word and big valuations agree on a shared range") {
  for (std::int64_t x = -2000; x <= 2000; ++x) {
    for (std::uint64_t p : {2, 3, 5, 7}) {
      CAPTURE(x, p);
      REQUIRE(vp(x, p) == vp(bigint(x), p));
    }
  }
}

TEST_CASE("factorial valuations by the floor-sum formula") {
  CHECK(vp_factorial(0, 3) == valuation(0));
  CHECK(vp_factorial(1, 3) == valuation(0));
  CHECK(vp_factorial(10, 3) == valuation(4));
  // 73 + 24 + 8 + 2, and 243 > 221 ends the sum
  CHECK(vp_factorial(221, 3) == valuation(107));
  // v2(100!) = 100 - (binary digit sum of 100) = 97
  CHECK(vp_factorial(100, 2) == valuation(97));
  CHECK_THROWS_AS(vp_factorial(10, 6), std::invalid_argument);
}

TEST_CASE("floor-sum equals the valuation of the product") {
  bigint f = 1;
  for (std::uint64_t m = 1; m <= 400; ++m) {
    f *= m;
    for (std::uint64_t p : {2, 3, 5, 7, 11}) {
      CAPTURE(m, p);
      REQUIRE(vp_factorial(m, p) == vp(f, p));
    }
  }
}

TEST_CASE("factorial valuation sandwich") {
  auto [lo, hi] = vp_factorial_bounds(221, 3);
  CHECK(lo == bigrat(211, 2));  // 221/2 - 4 - 1
  CHECK(hi == bigrat(110));
  CHECK(bigrat(vp_factorial(221, 3).finite()) >= lo);
  CHECK(bigrat(vp_factorial(221, 3).finite()) <= hi);

  auto [l1, h1] = vp_factorial_bounds(1, 7);
  CHECK(l1 <= 0);
  CHECK(h1 == 0);
  CHECK_THROWS_AS(vp_factorial_bounds(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(vp_factorial_bounds(10, 9), std::invalid_argument);

  for (std::uint64_t m = 1; m <= 3000; ++m) {
    for (std::uint64_t p : {2, 3, 5, 7}) {
      CAPTURE(m, p);
      auto [a, b] = vp_factorial_bounds(m, p);
      const bigrat v(vp_factorial(m, p).finite());
      REQUIRE(a <= v);
      REQUIRE(v <= b);
    }
  }
}

TEST_CASE("certified logarithm brackets") {
  auto l2 = ln2_bracket();
  auto l3 = ln3_bracket();
  // ln 2 = 0.69314718..., ln 3 = 1.09861228...
  CHECK(l2.lo < bigrat(693148, 1000000));
  CHECK(l2.hi > bigrat(693147, 1000000));
  CHECK(l2.width() < bigrat(1, bigint(1) << 40));
  CHECK(l3.lo < bigrat(1098613, 1000000));
  CHECK(l3.hi > bigrat(1098612, 1000000));

  // e = 2.718281828459...; ln crosses 1 between these two rationals
  CHECK(ln_bracket(bigrat(271828182, 100000000)).hi < 1);
  CHECK(ln_bracket(bigrat(271828183, 100000000)).lo > 1);

  auto l8 = ln_bracket(bigrat(8));
  rat_interval three_l2{l2.lo * 3, l2.hi * 3};
  CHECK(l8.lo <= three_l2.hi);
  CHECK(l8.hi >= three_l2.lo);

  auto lhalf = ln_bracket(bigrat(1, 2));
  CHECK(lhalf.hi < 0);
  CHECK(lhalf.lo >= -l2.hi - bigrat(1, bigint(1) << 30));
  CHECK_THROWS_AS(ln_bracket(bigrat(0)), std::domain_error);
  CHECK_THROWS_AS(ln_bracket(bigrat(-3)), std::domain_error);
}

TEST_CASE("ln brackets shrink as terms grow and stay nested") {
  auto coarse = ln_bracket(bigrat(10), 4);
  auto fine = ln_bracket(bigrat(10), 48);
  CHECK(fine.lo >= coarse.lo);
  CHECK(fine.hi <= coarse.hi);
  CHECK(fine.width() < coarse.width());
  // ln 10 = 2.302585...
  CHECK(fine.lo < bigrat(2302586, 1000000));
  CHECK(fine.hi > bigrat(2302585, 1000000));
}

TEST_CASE("outward dyadic coarsening") {
  rat_interval iv{bigrat(1, 3), bigrat(2, 3)};
  auto c = coarsen(iv, 16);
  CHECK(c.lo <= iv.lo);
  CHECK(c.hi >= iv.hi);
  CHECK(iv.lo - c.lo < bigrat(1, 1 << 16));
  CHECK(c.hi - iv.hi < bigrat(1, 1 << 16));
  CHECK(boost::multiprecision::denominator(c.lo) <= bigint(1) << 16);

  auto neg = coarsen(rat_interval{bigrat(-2, 3), bigrat(-1, 3)}, 16);
  CHECK(neg.lo <= bigrat(-2, 3));
  CHECK(neg.hi >= bigrat(-1, 3));
  CHECK(dyadic_below(bigrat(5, 4), 2) == bigrat(5, 4));
  CHECK(dyadic_above(bigrat(5, 4), 2) == bigrat(5, 4));
}

TEST_CASE("interval arithmetic is sign-aware") {
  rat_interval a{bigrat(1), bigrat(2)};
  auto scaled = bigrat(-3) * a;
  CHECK(scaled.lo == bigrat(-6));
  CHECK(scaled.hi == bigrat(-3));
  auto shifted = a + bigrat(5);
  CHECK(shifted.lo == bigrat(6));
  CHECK(shifted.hi == bigrat(7));
  auto sum = a + rat_interval{bigrat(-1), bigrat(1)};
  CHECK(sum.lo == bigrat(0));
  CHECK(sum.hi == bigrat(3));
  CHECK(a.contains(bigrat(3, 2)));
  CHECK(!a.contains(bigrat(3)));
  CHECK(a.negate().lo == bigrat(-2));
  CHECK_THROWS_AS(rat_interval(bigrat(2), bigrat(1)), std::invalid_argument);
}
