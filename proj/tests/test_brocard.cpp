#include <catch2/catch_amalgamated.hpp>

#include <narayana/brocard.hpp>

using namespace narayana;

TEST_CASE("combined valuation of a_n^2 - 1 from the tables") {
  CHECK(combined_v3_upper(4) == valuation(1));
  CHECK(combined_v3_upper(9) == valuation(1));
  CHECK(combined_v3_upper(10) == valuation(2));
  CHECK(combined_v3_upper(18) == valuation(4));
  CHECK(combined_v3_upper(20) == valuation(2));
  CHECK_THROWS_AS(combined_v3_upper(3), std::invalid_argument);
}

TEST_CASE("combined valuation equals exact factorization of a_n^2 - 1") {
  window w = narayana_window(4);
  for (std::uint64_t n = 4; n <= 1200; ++n) {
    CAPTURE(n);
    const bigint t = w.values[0] * w.values[0] - 1;
    REQUIRE(combined_v3_upper(n) == vp(t, 3));
    w.step();
  }
}

TEST_CASE("factorial cursor: hits, brackets, monotonicity contract") {
  factorial_cursor cur;
  CHECK(cur.is_factorial(bigint(1)) == std::uint64_t(0));  // 0! = 1
  CHECK(cur.is_factorial(bigint(2)) == std::uint64_t(2));
  CHECK(!cur.is_factorial(bigint(3)).has_value());
  CHECK(cur.m() == 3);  // bracket: 2! < 3 < 3!
  CHECK(cur.factorial() == 6);
  CHECK(cur.is_factorial(bigint(24)) == std::uint64_t(4));
  CHECK(!cur.is_factorial(bigint(25)).has_value());
  CHECK(cur.is_factorial(bigint(5040)) == std::uint64_t(7));
  CHECK_THROWS_AS(cur.is_factorial(bigint(24)), std::logic_error);
}

TEST_CASE("factorial cursor amortizes to one multiplication per step") {
  factorial_cursor cur;
  bigint f = 2;
  for (std::uint64_t m = 2; m <= 30; ++m) {
    REQUIRE(cur.is_factorial(f) == m);
    f *= m + 1;
  }
  CHECK(cur.multiplications() == 30);
}

TEST_CASE("sequence-driven scan finds no factorial among a_n^2 - 1") {
  const auto out = search_narayana(300);
  CHECK(out.lo == 4);
  CHECK(out.hi == 300);
  CHECK(out.solutions.empty());
  CHECK(out.candidates == 297);
  CHECK(out.undershoot + out.overshoot == 297);
  CHECK_THROWS_AS(search_narayana(3), std::invalid_argument);
}

TEST_CASE("sequence-driven scan: threaded chunks merge to the same tallies") {
  const auto one = search_narayana(800, 1);
  const auto four = search_narayana(800, 4);
  CHECK(one.candidates == four.candidates);
  CHECK(one.undershoot == four.undershoot);
  CHECK(one.overshoot == four.overshoot);
  CHECK(one.solutions == four.solutions);
}

TEST_CASE("general scan recovers exactly the three classical solutions") {
  const auto out = search_general(50);
  REQUIRE(out.solutions.size() == 3);
  CHECK(out.solutions == classical_brocard_solutions());
  for (const auto& [m, u] : out.solutions) {
    bigint f = 1;
    for (std::uint64_t k = 2; k <= m; ++k) f *= k;
    CHECK(f + 1 == u * u);
  }
  CHECK(search_general(3).solutions.empty());
  CHECK(search_general(10).solutions.size() == 3);
  CHECK_THROWS_AS(search_general(0), std::invalid_argument);
}

TEST_CASE("nonsolution certificates: brackets frozen at small indices") {
  // a_5 = 3: 3! < 8 < 4!; a_7 = 6: 4! < 35 < 5!; a_10 = 19: 5! < 360 < 6!
  auto c5 = certify_nonsolution(5);
  REQUIRE(c5.has_value());
  CHECK(c5->t == 8);
  CHECK(c5->below_m == 3);
  auto c7 = certify_nonsolution(7);
  REQUIRE(c7.has_value());
  CHECK(c7->t == 35);
  CHECK(c7->below_m == 4);
  auto c10 = certify_nonsolution(10);
  REQUIRE(c10.has_value());
  CHECK(c10->t == 360);
  CHECK(c10->below_m == 5);
  CHECK_THROWS_AS(certify_nonsolution(3), std::invalid_argument);
}

TEST_CASE("nonsolution certificates exist and verify on a whole range") {
  for (std::uint64_t n = 4; n <= 300; ++n) {
    CAPTURE(n);
    auto cert = certify_nonsolution(n);
    REQUIRE(cert.has_value());
    REQUIRE(verify_certificate(*cert));
  }
}

TEST_CASE("certificate verifier rejects doctored records") {
  auto cert = certify_nonsolution(10);
  REQUIRE(cert.has_value());
  auto bad = *cert;
  bad.t += 1;
  CHECK(!verify_certificate(bad));
  bad = *cert;
  bad.below_m += 1;
  CHECK(!verify_certificate(bad));
  bad = *cert;
  bad.t_v3 = valuation(bad.t_v3.finite() + 1);
  CHECK(!verify_certificate(bad));
  bad = *cert;
  bad.v3_m_lo += 1;
  CHECK(!verify_certificate(bad));
}

TEST_CASE("some certificates use an empty valuation window") {
  // v3(m!) skips 3: it jumps 2 -> 4 at m = 9. Index 26 has t_v3 = 3.
  auto cert = certify_nonsolution(26);
  REQUIRE(cert.has_value());
  CHECK(cert->t_v3 == valuation(3));
  CHECK(cert->v3_interval_empty);
  CHECK(cert->v3_excludes);
  CHECK(verify_certificate(*cert));
}

TEST_CASE("derived cutoffs and their trace") {
  const auto res = derive_bounds();
  CHECK(res.m_max == 221);
  CHECK(res.n_max == 1386);
  CHECK(res.m_max_strict == 167);
  CHECK(res.n_max_strict == 986);
  CHECK(res.factor_count == 9);
  CHECK(res.addend_sum == 16);
  CHECK(res.max_offset == 30);
  CHECK(res.offsets == std::vector<std::int64_t>{-1, 2, -2, 6, 30, -3, 13, 5, 4});
  CHECK(res.offsets_alt == std::vector<std::int64_t>{-1, 2, -2, 6, 30, -3, 13, 15, 4});
  CHECK(!res.offsets_note.empty());
  CHECK(res.budget_reentries == 0);
  CHECK(!res.subst_form_crosses);
  CHECK(res.budget_horizon >= 100000);
  CHECK(res.predicate_horizon >= 2 * res.m_max);

  // 4 + 1.33 * 221 * ln(110.5) = 1386.945..., bracketed tightly
  CHECK(res.n_bound_lo > bigrat(13869, 10));
  CHECK(res.n_bound_hi < bigrat(13870, 10));
  CHECK(res.n_bound_hi - res.n_bound_lo < bigrat(1, 1000000));

  bool saw_221 = false, saw_222 = false, saw_167 = false, saw_168 = false;
  for (const auto& p : res.trace) {
    if (p.m == 221) {
      saw_221 = true;
      CHECK(p.budget_ok);
      CHECK(p.lhs == 9);
      CHECK(p.subst_ok);
    }
    if (p.m == 222) {
      saw_222 = true;
      CHECK(!p.budget_ok);
      CHECK(p.lhs == 10);
      CHECK(p.subst_ok);  // the division form still holds past the budget cutoff
    }
    if (p.m == 167) {
      saw_167 = true;
      CHECK(p.strict_ok);
    }
    if (p.m == 168) {
      saw_168 = true;
      CHECK(!p.strict_ok);
    }
    CHECK(p.subst_rhs_lo <= p.subst_rhs_hi);
    CHECK(p.strict_rhs_lo <= p.strict_rhs_hi);
  }
  CHECK(saw_221);
  CHECK(saw_222);
  CHECK(saw_167);
  CHECK(saw_168);
}

TEST_CASE("budget predicate values at the crossover") {
  using detail::budget_lhs;
  CHECK(budget_lhs(221) == 9);
  CHECK(budget_lhs(222) == 10);
  CHECK(budget_lhs(4) < 0);  // floor of a negative quotient rounds down
  CHECK(floor_div(-7, 18) == -1);
  CHECK(floor_div(7, 18) == 0);
  CHECK(floor_div(-36, 18) == -2);
}
