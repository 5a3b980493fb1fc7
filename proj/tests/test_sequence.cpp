#include <catch2/catch_amalgamated.hpp>

#include <narayana/sequence.hpp>

#include <random>

namespace ny = narayana;
using namespace narayana;

namespace {

// First 31 terms, recomputed by hand from a(n) = a(n-1) + a(n-3).
const std::vector<std::uint64_t> small_terms = {
    0,    1,    1,    1,    2,    3,    4,    6,     9,     13,    19,
    28,   41,   60,   88,   129,  189,  277,  406,   595,   872,   1278,
    1873, 2745, 4023, 5896, 8641, 12664, 18560, 27201, 39865};

} // namespace

TEST_CASE("iterative terms match the hand-computed prefix") {
  window w;
  for (std::uint64_t n = 0; n < small_terms.size(); ++n) {
    CAPTURE(n);
    CHECK(ny::narayana(n) == small_terms[n]);
    CHECK(w.values[0] == small_terms[n]);
    w.step();
  }
}

TEST_CASE("windows expose three consecutive terms") {
  auto w0 = narayana_window(0);
  CHECK(w0.values == std::array<bigint, 3>{0, 1, 1});
  auto w4 = narayana_window(4);
  CHECK(w4.values == std::array<bigint, 3>{2, 3, 4});
  auto w20 = narayana_window(20);
  CHECK(w20.values == std::array<bigint, 3>{872, 1278, 1873});
}

TEST_CASE("large exact terms") {
  CHECK(ny::narayana(72) == bigint("374009739309"));
  CHECK(ny::narayana(73) == bigint("548137914373"));
  CHECK(ny::narayana(74) == bigint("803335158406"));
}

TEST_CASE("modular walk agrees with exact terms") {
  const std::uint64_t m = 729;
  CHECK(narayana_mod<std::uint64_t>(72, m) == 648);
  CHECK(narayana_mod<std::uint64_t>(73, m) == 433);
  CHECK(narayana_mod<std::uint64_t>(74, m) == 163);
  for (std::uint64_t n = 0; n < small_terms.size(); ++n) {
    CAPTURE(n);
    CHECK(narayana_mod<std::uint64_t>(n, 97) == small_terms[n] % 97);
  }
  CHECK(narayana_mod<bigint>(72, bigint(729)) == 648);
  CHECK_THROWS_AS(narayana_mod<std::uint64_t>(5, 1), std::invalid_argument);
  CHECK_THROWS_AS(narayana_mod<std::uint64_t>(5, 0), std::invalid_argument);
}

TEST_CASE("modular walk survives moduli near 2^64") {
  const std::uint64_t m = UINT64_MAX;
  const std::uint64_t m2 = UINT64_MAX - 58;
  for (std::uint64_t n : {40u, 90u, 120u}) {
    bigint exact = ny::narayana(n);
    CHECK(narayana_mod<std::uint64_t>(n, m) ==
          static_cast<std::uint64_t>(exact % m));
    CHECK(narayana_mod<std::uint64_t>(n, m2) ==
          static_cast<std::uint64_t>(exact % m2));
  }
}

TEST_CASE("splitting path equals the iterative path") {
  for (std::uint64_t n = 0; n <= 300; ++n) {
    CAPTURE(n);
    CHECK(narayana_fast(n) == ny::narayana(n));
  }
  auto fw = fast_window(2000);
  auto iw = narayana_window(2000);
  CHECK(fw.values == iw.values);
}

TEST_CASE("splitting path under a modulus") {
  const std::uint64_t moduli[] = {2, 3, 729, 1000003, (1ULL << 61) - 1,
                                  UINT64_MAX};
  for (std::uint64_t m : moduli) {
    for (std::uint64_t n : {0u, 1u, 7u, 64u, 100u, 257u}) {
      CAPTURE(m, n);
      CHECK(fast_window_mod(n, m)[0] == narayana_mod<std::uint64_t>(n, m));
    }
  }
  bigint big = ny::narayana(5000);
  CHECK(fast_window_mod(5000, 1000003)[0] ==
        static_cast<std::uint64_t>(big % 1000003));
  CHECK_THROWS_AS(fast_window_mod(10, 1), std::invalid_argument);
}

TEST_CASE("addition identity splits indices exactly") {
  window w;
  std::vector<bigint> a;
  for (std::uint64_t n = 0; n <= 130; ++n) {
    a.push_back(w.values[0]);
    w.step();
  }
  for (std::uint64_t m = 3; m <= 60; ++m) {
    for (std::uint64_t n = 0; n <= 60; ++n) {
      CAPTURE(m, n);
      bigint rhs = a[m - 1] * a[n + 2] + a[m - 3] * a[n + 1] + a[m - 2] * a[n];
      REQUIRE(a[m + n] == rhs);
    }
  }
}

TEST_CASE("terms are strictly increasing from index 3") {
  window w = narayana_window(3);
  bigint prev = w.values[0];
  for (std::uint64_t n = 4; n <= 400; ++n) {
    w.step();
    REQUIRE(w.values[0] > prev);
    prev = w.values[0];
  }
}

TEST_CASE("alpha brackets the real root of x^3 - x^2 - 1") {
  auto a8 = alpha(8);
  CHECK(a8.precision_bits == 8);
  CHECK(a8.upper - a8.lower == bigrat(1, 256));
  // Root is 1.46557123..., so any sound bracket of width 2^-8 stays inside.
  CHECK(a8.lower > bigrat(14, 10));
  CHECK(a8.upper < bigrat(15, 10));

  auto a64 = alpha(64);
  CHECK(a64.lower >= a8.lower);
  CHECK(a64.upper <= a8.upper);
  CHECK(a64.lower > bigrat(146557123, 100000000));
  CHECK(a64.upper < bigrat(146557124, 100000000));

  auto sign_at = [](const bigrat& x) {
    bigrat v = x * x * x - x * x - 1;
    return v < 0 ? -1 : (v > 0 ? 1 : 0);
  };
  CHECK(sign_at(a64.lower) < 0);
  CHECK(sign_at(a64.upper) > 0);
  CHECK_THROWS_AS(alpha(7), std::invalid_argument);
}

TEST_CASE("growth envelope holds on a long prefix") {
  auto rep = check_growth_bounds(500);
  CHECK(rep.clean());
  CHECK(rep.n_max == 500);
  CHECK(rep.precision_bits >= 64);
  CHECK_THROWS_AS(check_growth_bounds(0), std::invalid_argument);
}

TEST_CASE("growth envelope certifies each side separately") {
  // a(n) must sit inside [alpha^(n-3), alpha^(n-1)] for n >= 1.
  auto br = alpha(128);
  window w = narayana_window(1);
  for (std::uint64_t n = 1; n <= 40; ++n) {
    CAPTURE(n);
    bigrat an(w.values[0]);
    bigrat lo = 1, hi = 1;
    if (n >= 3) {
      for (std::uint64_t k = 0; k < n - 3; ++k) lo *= br.lower;
      for (std::uint64_t k = 0; k < n - 1; ++k) hi *= br.upper;
    } else {
      // n-3 underflows; exponents 0 or negative reduce to 1 or 1/alpha shifts.
      for (std::uint64_t k = 0; k < 3 - n; ++k) lo /= br.upper;
      for (std::uint64_t k = 0; k < n - 1; ++k) hi *= br.upper;
    }
    CHECK(an >= lo);
    CHECK(an <= hi);
    w.step();
  }
}

TEST_CASE("random index pairs satisfy the addition identity") {
  window w;
  std::vector<bigint> a;
  for (std::uint64_t n = 0; n <= 4000; ++n) {
    a.push_back(w.values[0]);
    w.step();
  }
  std::mt19937_64 rng(0x5eed0001);
  std::uniform_int_distribution<std::uint64_t> dm(3, 2000), dn(0, 2000);
  for (int trial = 0; trial < 500; ++trial) {
    std::uint64_t m = dm(rng), n = dn(rng);
    CAPTURE(m, n);
    bigint rhs = a[m - 1] * a[n + 2] + a[m - 3] * a[n + 1] + a[m - 2] * a[n];
    REQUIRE(a[m + n] == rhs);
  }
}
