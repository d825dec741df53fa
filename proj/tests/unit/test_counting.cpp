#include <cmath>
#include <random>

#include "../support/counting_oracle.hpp"
#include "doctest.h"
#include "nlslab/counting.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/parallel.hpp"

using namespace nlslab;
using namespace nlslab::counting;

TEST_SUITE("counting") {
  TEST_CASE("ball enumeration") {
    CHECK(enumerate_ball(2, {0, 0}, 1.0).size() == 5);
    CHECK(enumerate_ball(2, {0, 0}, 2.5).size() == 21);
    const auto one = enumerate_ball(1, {7}, 0.5);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == FreqVector{7});
    CHECK_THROWS_AS(enumerate_ball(1, {FreqVector::kCoordBound}, 2.0), OverflowError);
  }

  TEST_CASE("count fixtures") {
    auto q = CountQuery::make(LemmaTag::NumberA, 2);
    q.mu_star = 25;
    q.R = 6;
    CHECK(exact_count(q) == 12);
    q.mu_star = -1;
    CHECK(exact_count(q) == 0);

    auto b = CountQuery::make(LemmaTag::NumberB, 2);
    b.mu_star = 4;
    b.R = 3;
    CHECK(exact_count(b) == 6);

    auto l = CountQuery::make(LemmaTag::Ldminus, 2);
    l.n_star = {1, 0};
    l.mu_star = 1;
    l.R = 5;
    CHECK(exact_count(l) == 9);
    l.n_star = {0, 0};
    CHECK_THROWS_AS(exact_count(l), PreconditionError);
  }

  TEST_CASE("query validation") {
    auto q = CountQuery::make(LemmaTag::NumberA, 2);
    q.R = 1.0;
    CHECK_THROWS_AS(validate(q), ParameterError);
    q.R = std::nan("");
    CHECK_THROWS_AS(validate(q), QueryError);
    CHECK_THROWS_AS(validate(CountQuery::make(LemmaTag::NumberB, 3)), ParameterError);
    CHECK_THROWS_AS(validate(CountQuery::make(LemmaTag::C1plus, 2)), ParameterError);
  }

  TEST_CASE("bound fixtures") {
    auto q = CountQuery::make(LemmaTag::NumberA, 2);
    q.R = 10;
    CHECK(theoretical_bound(q, 0.25, 1.0) == doctest::Approx(std::pow(10.0, 0.25)).epsilon(1e-12));
    auto l = CountQuery::make(LemmaTag::Ldminus, 2);
    l.n_star = {1, 0};
    l.R = 10;
    CHECK(theoretical_bound(l, 0.25, 1.0) == doctest::Approx(10.0));
    auto p = CountQuery::make(LemmaTag::Ldprime, 2);
    p.R1 = p.R3 = 4;
    CHECK(theoretical_bound(p, 0.0, 1.0) == doctest::Approx(16.0));
    CHECK_THROWS_AS(theoretical_bound(p, -0.1, 1.0), ParameterError);
    CHECK_THROWS_AS(theoretical_bound(p, 0.1, 0.0), ParameterError);
    const auto r = count_constrained(l, 0.25, 1.0);
    CHECK(r.ratio == doctest::Approx(static_cast<double>(r.exact_count) / r.bound_value));
  }

  TEST_CASE("arithmetic fixtures") {
    CHECK(divisor_count(1) == 1);
    CHECK(divisor_count(12) == 6);
    CHECK(divisor_count(97) == 2);
    CHECK(divisor_count(101 * 103) == 4);
    CHECK_THROWS_AS(divisor_count(0), ParameterError);
    CHECK(lcm_gcd_identity_check(1, 1, 1));
    CHECK(lcm_gcd_identity_check(4, 6, 10));
    CHECK(lcm_gcd_identity_check(7, 11, 13));
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> u(1, 1'000'000);
    for (int i = 0; i < 1000; ++i) CHECK(lcm_gcd_identity_check(u(rng), u(rng), u(rng)));
  }

  TEST_CASE("counts agree with the naive oracle") {
    std::mt19937_64 rng(2024);
    for (const auto tag : kAllLemmas) {
      CAPTURE(to_string(tag));
      std::uint64_t nonzero = 0;
      for (int rep = 0; rep < 60; ++rep) {
        const auto q = oracle::random_query(tag, rng, 6.0);
        const auto expected = oracle::count(q, false);
        CHECK(oracle::count(q, true) == expected);
        CHECK(exact_count(q) == expected);
        nonzero += expected > 0;
      }
      CHECK(nonzero > 0);
    }
  }

  TEST_CASE("NumberA is translation invariant") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> s(-1000, 1000);
    for (int rep = 0; rep < 30; ++rep) {
      auto q = oracle::random_query(LemmaTag::NumberA, rng);
      const auto base = exact_count(q);
      const FreqVector shift = q.d == 2 ? FreqVector{s(rng), s(rng)} : FreqVector{s(rng), s(rng), s(rng)};
      q.n_star += shift;
      q.ball_center += shift;
      CHECK(exact_count(q) == base);
    }
  }

  TEST_CASE("scans") {
    const double grid[] = {4, 8, 16, 32};
    const auto a = scan_worst_case(LemmaTag::NumberB, 2, grid, 40, 1);
    REQUIRE(a.rows.size() == 4);
    CHECK(a.all_counts.size() == 160);
    CHECK(a.slope <= 0.6);
    parallel::set_threads(3);
    const auto b = scan_worst_case(LemmaTag::NumberB, 2, grid, 40, 1);
    parallel::set_threads(1);
    const auto c = scan_worst_case(LemmaTag::NumberB, 2, grid, 40, 1);
    CHECK(b.all_counts == a.all_counts);
    CHECK(c.all_counts == a.all_counts);
    CHECK(b.slope == a.slope);

    const auto empty = scan_worst_case(LemmaTag::NumberA, 2, grid, 0, 1);
    CHECK(empty.rows.empty());
    CHECK_THROWS_AS(scan_worst_case(LemmaTag::NumberA, 2, {}, 10, 1), ParameterError);

    const double jgrid[] = {4, 8};
    const auto j = scan_worst_case(LemmaTag::NumberA, 2, jgrid, 20, 9, 0.25, ScanRegime::Jarnik);
    for (const auto n : j.all_counts) CHECK(n <= 2);
    for (const auto& row : j.rows) CHECK(static_cast<double>(row.query.mu_star) > std::pow(10 * row.query.R, 6));
  }
}
