#include <algorithm>
#include <random>

#include "doctest.h"
#include "nlslab/errors.hpp"
#include "nlslab/lattice.hpp"

using namespace nlslab;

namespace {

FreqTuple tuple(std::initializer_list<FreqVector> v) { return FreqTuple(std::vector<FreqVector>(v)); }

std::vector<FreqVector> cube(int d, std::int64_t r) {
  std::vector<FreqVector> out;
  if (d == 1) {
    for (std::int64_t a = -r; a <= r; ++a) out.push_back({a});
  } else {
    for (std::int64_t a = -r; a <= r; ++a)
      for (std::int64_t b = -r; b <= r; ++b) out.push_back({a, b});
  }
  return out;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("phi fixtures") {
    CHECK(phi(FreqVector{3}, tuple({{3}, {5}, {5}})) == 0);
    CHECK(phi(FreqVector{0, 0}, tuple({{1, 0}, {1, 1}, {0, 1}})) == 0);
    CHECK(phi(FreqVector{1}, tuple({{1}, {0}, {0}, {0}, {0}})) == 0);
    CHECK(phi(FreqVector{2}, tuple({{1}, {0}, {0}})) == 3);
    CHECK_THROWS_AS(phi(FreqVector{0, 0}, tuple({{1}, {0}, {0}})), DimensionError);
  }

  TEST_CASE("phi is symmetric within each sign class") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> c(-9, 9);
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<FreqVector> e;
      for (int i = 0; i < 5; ++i) e.push_back({c(rng), c(rng)});
      const FreqVector n{c(rng), c(rng)};
      auto swapped_odd = e;
      std::swap(swapped_odd[0], swapped_odd[4]);
      auto swapped_even = e;
      std::swap(swapped_even[1], swapped_even[3]);
      CHECK(phi(n, e) == phi(n, swapped_odd));
      CHECK(phi(n, e) == phi(n, swapped_even));
    }
  }

  TEST_CASE("order fixtures") {
    CHECK(order_compare({1, 0}, {0, 1}) == std::strong_ordering::greater);
    CHECK(order_compare({2, 0}, {1, 1}) == std::strong_ordering::greater);
    CHECK(order_compare({1, 1}, {1, 1}) == std::strong_ordering::equal);
    CHECK_THROWS_AS(order_compare({1}, {1, 1}), DimensionError);
  }

  TEST_CASE("order is a total order compatible with the norm") {
    for (int d = 1; d <= 2; ++d) {
      const auto pts = cube(d, 2);
      for (const auto& a : pts) {
        for (const auto& b : pts) {
          const auto ab = order_compare(a, b);
          CHECK((ab == std::strong_ordering::equal) == (a == b));
          CHECK(order_compare(b, a) == 0 <=> ab);
          if (ab >= 0) CHECK(a.norm2() >= b.norm2());
          for (const auto& c : pts) {
            if (ab > 0 && order_compare(b, c) > 0) CHECK(order_compare(a, c) > 0);
          }
        }
      }
    }
  }

  TEST_CASE("classifier fixtures") {
    CHECK(rank_and_classify(tuple({{3, 0}, {3, 0}, {5, 5}}), 2, 1).cls == ExceptionalClass::InACubic);
    CHECK(rank_and_classify(tuple({{1, 0}, {2, 0}, {3, 0}}), 2, 1).cls == ExceptionalClass::NotInA);
    CHECK(rank_and_classify(tuple({{1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 0, 0}}), 3, 2).cls ==
          ExceptionalClass::NotInA);
    const auto p = rank_and_classify(tuple({{2, 0}, {4, 0}, {2, 0}, {1, 0}, {3, 0}}), 2, 2);
    CHECK(p.cls == ExceptionalClass::InA3);
    CHECK(p.order == std::vector<int>{1, 4, 0, 2, 3});
    CHECK(rank_and_classify(tuple({{4}, {4}, {2}, {1}, {0}}), 1, 2).cls == ExceptionalClass::InA1);
    CHECK(rank_and_classify(tuple({{9}, {4}, {4}, {1}, {0}}), 1, 2).cls == ExceptionalClass::InA2);
    // A3 is only tested for d = 2.
    CHECK(rank_and_classify(tuple({{4}, {3}, {2}, {2}, {1}}), 1, 2).cls == ExceptionalClass::NotInA);
    CHECK_THROWS_AS(rank_and_classify(tuple({{1}, {2}, {3}}), 1, 1), UnsupportedCase);
    CHECK_THROWS_AS(rank_and_classify(tuple({{1, 0}, {2, 0}, {3, 0}}), 2, 2), ArityError);
  }

  TEST_CASE("ranked classes depend only on the multiset") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> c(-3, 3);
    for (const auto [d, k] : {std::pair{1, 2}, {2, 2}, {3, 2}}) {
      for (int rep = 0; rep < 50; ++rep) {
        std::vector<FreqVector> e;
        for (int i = 0; i < 2 * k + 1; ++i) {
          std::vector<std::int64_t> v(static_cast<std::size_t>(d));
          for (auto& x : v) x = c(rng);
          e.emplace_back(std::span<const std::int64_t>(v));
        }
        const auto base = rank_and_classify(FreqTuple(e), d, k).cls;
        std::sort(e.begin(), e.end());
        do {
          CHECK(rank_and_classify(FreqTuple(e), d, k).cls == base);
        } while (std::next_permutation(e.begin(), e.end()));
      }
    }
  }

  TEST_CASE("cubic class is invariant under swapping n1 and n3") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<std::int64_t> c(-2, 2);
    for (int rep = 0; rep < 200; ++rep) {
      const FreqVector a{c(rng), c(rng)}, b{c(rng), c(rng)}, e{c(rng), c(rng)};
      CHECK(rank_and_classify(tuple({a, b, e}), 2, 1).cls == rank_and_classify(tuple({e, b, a}), 2, 1).cls);
    }
  }

  TEST_CASE("classify_entries agrees with rank_and_classify") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::int64_t> c(-3, 3);
    for (const auto [d, k] : {std::pair{2, 1}, {3, 1}, {1, 2}, {2, 2}, {1, 3}, {4, 1}}) {
      const auto regime = exceptional_regime(d, k);
      for (int rep = 0; rep < 100; ++rep) {
        std::vector<FreqVector> e;
        for (int i = 0; i < 2 * k + 1; ++i) {
          std::vector<std::int64_t> v(static_cast<std::size_t>(d));
          for (auto& x : v) x = c(rng);
          e.emplace_back(std::span<const std::int64_t>(v));
        }
        CHECK(classify_entries(e, regime, d, k) == rank_and_classify(FreqTuple(e), d, k).cls);
      }
    }
  }

  TEST_CASE("bracket comparison is exact") {
    CHECK(bracket_three_halves_le({3, 0}, {2, 0}));   // 100 <= 125
    CHECK_FALSE(bracket_three_halves_le({4, 0}, {2, 0}));  // 289 > 125
    CHECK(japanese_bracket({0, 0}) == 1.0);
  }

  TEST_CASE("coordinate bound") {
    CHECK_NOTHROW(FreqVector{FreqVector::kCoordBound});
    CHECK_THROWS_AS(FreqVector{FreqVector::kCoordBound + 1}, OverflowError);
  }
}
