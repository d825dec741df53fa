#pragma once

// Naive reference counts for the counting tests. Every ball-bounded variable
// is listed by scanning its bounding box, pairs are visited in a full double
// loop, and the remaining variable is read off the linear constraint. No
// quadratic is ever solved, so the results are independent of the engine.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nlslab/counting.hpp"

namespace oracle {

using nlslab::FreqVector;
using nlslab::counting::CountQuery;
using nlslab::counting::LemmaTag;
/// Fixed-capacity coordinates, compared over the first `d` entries.
struct Vec {
  std::array<std::int64_t, 4> c{};
  std::size_t d = 0;

  Vec() = default;
  Vec(std::size_t dim, std::int64_t fill) : d(dim) { c.fill(fill); }
  std::size_t size() const { return d; }
  std::int64_t& operator[](std::size_t i) { return c[i]; }
  std::int64_t operator[](std::size_t i) const { return c[i]; }
  const std::int64_t* begin() const { return c.data(); }
  const std::int64_t* end() const { return c.data() + d; }
  friend bool operator==(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.d; ++i)
      if (a.c[i] != b.c[i]) return false;
    return a.d == b.d;
  }
  FreqVector freq() const { return FreqVector(std::span<const std::int64_t>(c.data(), d)); }
};

inline Vec coords(const FreqVector& v) {
  Vec out(static_cast<std::size_t>(v.dim()), 0);
  for (int i = 0; i < v.dim(); ++i) out[static_cast<std::size_t>(i)] = v[i];
  return out;
}

inline std::int64_t norm2(const Vec& v) {
  std::int64_t s = 0;
  for (const auto x : v) s += x * x;
  return s;
}

inline Vec lin(const Vec& a, int sa, const Vec& b, int sb) {
  Vec out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = sa * a[i] + sb * b[i];
  return out;
}

inline bool within(const Vec& x, const Vec& c, double R) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
  return static_cast<double>(s) <= R * R;
}

/// Points of the closed ball, found by scanning the whole bounding box.
inline std::vector<Vec> ball(const Vec& c, double R, bool reverse) {
  const auto r = static_cast<std::int64_t>(std::ceil(R));
  const std::size_t d = c.size();
  std::vector<Vec> out;
  Vec x(d, 0);
  for (std::size_t i = 0; i < d; ++i) x[i] = c[i] - r;
  while (true) {
    if (within(x, c, R)) out.push_back(x);
    std::size_t i = 0;
    while (i < d && x[i] == c[i] + r) {
      x[i] = c[i] - r;
      ++i;
    }
    if (i == d) break;
    ++x[i];
  }
  if (reverse) std::reverse(out.begin(), out.end());
  return out;
}

inline std::vector<Vec> ball(const FreqVector& c, double R, bool reverse) { return ball(coords(c), R, reverse); }

/// Visits every (a, b) with a in A and b in B; with `swap` the loops are
/// nested the other way round.
template <class Fn>
void pairs(const std::vector<Vec>& A, const std::vector<Vec>& B, bool swap, Fn&& fn) {
  if (!swap) {
    for (const auto& a : A)
      for (const auto& b : B) fn(a, b);
  } else {
    for (const auto& b : B)
      for (const auto& a : A) fn(a, b);
  }
}

inline std::uint64_t count(const CountQuery& q, bool reverse) {
  const Vec ns = coords(q.n_star);
  const Vec sub = coords(q.n_sub);
  const std::int64_t mu = q.mu_star;
  const Vec zero(static_cast<std::size_t>(q.d), 0);
  std::uint64_t c = 0;
  switch (q.tag) {
    case LemmaTag::NumberA:
      for (const auto& n : ball(q.ball_center, q.R, reverse)) c += norm2(lin(n, 1, ns, -1)) == mu;
      return c;
    case LemmaTag::NumberB:
      for (const auto& n : ball(q.ball_center, q.R, reverse)) {
        const auto dp = n[0] - ns[0], dq = n[1] - ns[1];
        c += dp * dp + 3 * dq * dq == mu;
      }
      return c;
    case LemmaTag::C1plus: {
      // |n1 - n_sub| + |n2| <= R: both lie in 1-d balls of radius R.
      const auto A = ball(sub, q.R, reverse), B = ball(zero, q.R, reverse);
      pairs(A, B, reverse, [&](const Vec& n1, const Vec& n2) {
        if (static_cast<double>(std::abs(n1[0] - sub[0]) + std::abs(n2[0])) > q.R) return;
        const Vec n3 = lin(lin(ns, 1, n1, -1), 1, n2, -1);
        c += norm2(n1) + norm2(n2) + norm2(n3) == mu;
      });
      return c;
    }
    case LemmaTag::Cdplus:
      for (const auto& n1 : ball(sub, q.R, reverse)) {
        const Vec n2 = lin(ns, 1, n1, -1);
        c += norm2(n1) + norm2(n2) == mu;
      }
      return c;
    case LemmaTag::Cdprimeplus: {
      const auto A = ball(zero, q.R1, reverse), B = ball(zero, q.R2, reverse);
      pairs(A, B, reverse, [&](const Vec& n1, const Vec& n2) {
        const Vec n3 = lin(lin(ns, 1, n1, -1), 1, n2, -1);
        c += norm2(n1) + norm2(n2) + norm2(n3) == mu;
      });
      return c;
    }
    case LemmaTag::L1minus1: {
      const auto A = ball(zero, q.R, reverse);
      pairs(A, A, reverse, [&](const Vec& n1, const Vec& n3) {
        if (static_cast<double>(std::abs(n1[0]) + std::abs(n3[0])) > q.R) return;
        const Vec n2 = lin(lin(n1, 1, n3, 1), 1, ns, -1);
        if (n2 == n1 || n2 == n3) return;
        c += norm2(n1) - norm2(n2) + norm2(n3) == mu;
      });
      return c;
    }
    case LemmaTag::L1minus2: {
      const auto A = ball(zero, q.R, reverse);
      pairs(A, A, reverse, [&](const Vec& n1, const Vec& n2) {
        if (static_cast<double>(std::abs(n1[0]) + std::abs(n2[0])) > q.R) return;
        const Vec n3 = lin(lin(ns, 1, n1, -1), 1, n2, 1);
        if (n2 == n1 || n2 == n3) return;
        c += norm2(n1) - norm2(n2) + norm2(n3) == mu;
      });
      return c;
    }
    case LemmaTag::Ldminus:
      for (const auto& n1 : ball(sub, q.R, reverse)) {
        const Vec n2 = lin(n1, 1, ns, -1);
        c += norm2(n1) - norm2(n2) == mu;
      }
      return c;
    case LemmaTag::Ldprime1:
    case LemmaTag::Ldprime: {
      const bool excl = q.tag == LemmaTag::Ldprime1;
      const auto A = ball(zero, q.R1, reverse), B = ball(zero, q.R3, reverse);
      pairs(A, B, reverse, [&](const Vec& n1, const Vec& n3) {
        const Vec n2 = lin(lin(n1, 1, n3, 1), 1, ns, -1);
        if (excl && (n2 == n1 || n2 == n3)) return;
        c += norm2(n1) - norm2(n2) + norm2(n3) == mu;
      });
      return c;
    }
    case LemmaTag::Ldprime2: {
      const auto A = ball(zero, q.R1, reverse), B = ball(zero, q.R2, reverse);
      pairs(A, B, reverse, [&](const Vec& n1, const Vec& n2) {
        const Vec n3 = lin(lin(ns, 1, n1, -1), 1, n2, 1);
        if (n2 == n1 || n2 == n3) return;
        c += norm2(n1) - norm2(n2) + norm2(n3) == mu;
      });
      return c;
    }
  }
  return c;
}

/// A random small query. Half of the draws plant a solution so that the
/// count is nonzero unless the exclusions remove it.
inline CountQuery random_query(LemmaTag tag, std::mt19937_64& rng, double r_max = 8.0) {
  const bool one_d = tag == LemmaTag::C1plus || tag == LemmaTag::L1minus1 || tag == LemmaTag::L1minus2;
  const int d = one_d ? 1 : tag == LemmaTag::NumberB ? 2 : 2 + static_cast<int>(rng() % 2);
  auto q = CountQuery::make(tag, d);
  std::uniform_real_distribution<double> radius(1.0 + 1e-9, r_max);
  std::uniform_int_distribution<std::int64_t> small(-4, 4);
  const auto vec = [&] {
    Vec v(static_cast<std::size_t>(d), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = small(rng);
    return v.freq();
  };
  q.R = radius(rng);
  q.R1 = radius(rng);
  q.R2 = radius(rng);
  q.R3 = radius(rng);
  q.n_star = vec();
  q.n_sub = vec();
  q.ball_center = vec();
  if (tag == LemmaTag::Ldminus) {
    while (q.n_star.norm2() == 0) q.n_star = vec();
  }

  if (rng() % 2 == 0) {
    q.mu_star = std::uniform_int_distribution<std::int64_t>(-60, 200)(rng);
    return q;
  }
  // Plant: pick the free variables inside their balls and solve for n*, mu*.
  const auto pick = [&](const FreqVector& c, double R) {
    const auto pts = ball(c, R, false);
    return pts[rng() % pts.size()];
  };
  const Vec zero(static_cast<std::size_t>(d), 0);
  switch (tag) {
    case LemmaTag::NumberA: {
      const auto n = pick(q.ball_center, q.R);
      q.mu_star = norm2(lin(n, 1, coords(q.n_star), -1));
      break;
    }
    case LemmaTag::NumberB: {
      const auto n = pick(q.ball_center, q.R);
      const auto dp = n[0] - q.n_star[0], dq = n[1] - q.n_star[1];
      q.mu_star = dp * dp + 3 * dq * dq;
      break;
    }
    case LemmaTag::Cdplus: {
      const auto n1 = pick(q.n_sub, q.R);
      const Vec n2 = lin(coords(q.n_star), 1, n1, -1);
      q.mu_star = norm2(n1) + norm2(n2);
      break;
    }
    case LemmaTag::Ldminus: {
      const auto n1 = pick(q.n_sub, q.R);
      q.mu_star = norm2(n1) - norm2(lin(n1, 1, coords(q.n_star), -1));
      break;
    }
    default: {
      // Three-entry tags: n1, n2, n3 drawn from the relevant balls.
      const double ra = tag == LemmaTag::C1plus || tag == LemmaTag::L1minus1 || tag == LemmaTag::L1minus2
                            ? q.R / 2
                            : q.R1;
      const double rb = tag == LemmaTag::Cdprimeplus || tag == LemmaTag::Ldprime2 ? q.R2
                        : tag == LemmaTag::C1plus || tag == LemmaTag::L1minus1 || tag == LemmaTag::L1minus2
                            ? q.R / 2
                            : q.R3;
      const bool plus = tag == LemmaTag::C1plus || tag == LemmaTag::Cdprimeplus;
      const Vec a = pick(tag == LemmaTag::C1plus ? q.n_sub : FreqVector::zero(d), std::max(ra, 1.0));
      const Vec b = pick(FreqVector::zero(d), std::max(rb, 1.0));
      Vec n1 = a, n2, n3;
      // The second drawn vector is n2 for (C1plus, Cdprimeplus, L1minus2, Ldprime2), n3 otherwise.
      const bool second_is_n2 = tag == LemmaTag::C1plus || tag == LemmaTag::Cdprimeplus ||
                                tag == LemmaTag::L1minus2 || tag == LemmaTag::Ldprime2;
      Vec third = pick(FreqVector::zero(d), 4.0);
      if (second_is_n2) {
        n2 = b;
        n3 = third;
      } else {
        n3 = b;
        n2 = third;
      }
      if (plus) {
        q.n_star = lin(lin(n1, 1, n2, 1), 1, n3, 1).freq();
        q.mu_star = norm2(n1) + norm2(n2) + norm2(n3);
      } else {
        q.n_star = lin(lin(n1, 1, n2, -1), 1, n3, 1).freq();
        q.mu_star = norm2(n1) - norm2(n2) + norm2(n3);
      }
      break;
    }
  }
  return q;
}

}  // namespace oracle
