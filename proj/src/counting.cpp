#include "nlslab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "nlslab/errors.hpp"
#include "nlslab/parallel.hpp"

namespace nlslab::counting {

namespace {

using i128 = __int128;

std::int64_t ball_limit(double R) { return static_cast<std::int64_t>(std::floor(R * R)); }

// floor(sqrt(v)) for v >= 0.
std::int64_t isqrt(i128 v) {
  if (v <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (static_cast<i128>(r) * r > v) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= v) ++r;
  return r;
}

bool is_square(i128 v, std::int64_t& root) {
  if (v < 0) return false;
  root = isqrt(v);
  return static_cast<i128>(root) * root == v;
}

// Distinct integer roots of a x^2 + b x + c = 0 (a > 0).
int integer_roots(i128 a, i128 b, i128 c, std::int64_t out[2]) {
  const i128 disc = b * b - 4 * a * c;
  std::int64_t t = 0;
  if (!is_square(disc, t)) return 0;
  int found = 0;
  for (const i128 num : {-b - t, -b + t}) {
    if (num % (2 * a) != 0) continue;
    const auto x = static_cast<std::int64_t>(num / (2 * a));
    if (found == 1 && out[0] == x) continue;
    out[found++] = x;
  }
  return found;
}

void check_ball_box(int d, const FreqVector& center, double R) {
  const auto reach = static_cast<std::int64_t>(std::floor(R));
  for (int i = 0; i < d; ++i) {
    if (std::abs(center[i]) + reach > FreqVector::kCoordBound) {
      throw OverflowError("ball of radius " + std::to_string(R) + " around " +
                          center.to_string() + " leaves the coordinate range");
    }
  }
}

// Visits every integer point whose coordinates other than `skip` satisfy
// sum_{i != skip} (n_i - c_i)^2 <= lim2. Coordinate `skip` is left at c_skip.
// Pass skip = -1 to enumerate the full ball. fn(point, partial_dist2).
template <class Fn>
void for_each_projected(const FreqVector& center, std::int64_t lim2, int skip, Fn&& fn) {
  const int d = center.dim();
  FreqVector p = center;
  auto rec = [&](auto&& self, int i, std::int64_t used) -> void {
    if (i == d) {
      fn(p, used);
      return;
    }
    if (i == skip) {
      self(self, i + 1, used);
      return;
    }
    const std::int64_t room = lim2 - used;
    const std::int64_t r = isqrt(room);
    for (std::int64_t x = -r; x <= r; ++x) {
      p.set_unchecked(i, center[i] + x);
      self(self, i + 1, used + x * x);
    }
    p.set_unchecked(i, center[i]);
  };
  if (lim2 >= 0) rec(rec, 0, 0);
}

std::int64_t dist2(const FreqVector& a, const FreqVector& b) {
  std::int64_t s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    const std::int64_t t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

int pick_pivot(const FreqVector& m) {
  int j = 0;
  for (int i = 1; i < m.dim(); ++i) {
    if (std::abs(m[i]) > std::abs(m[j])) j = i;
  }
  return j;
}

// #{x in B(center, lim2) : 2 m.x = target}, m != 0, with an optional
// excluded point.
std::uint64_t count_on_hyperplane(const FreqVector& center, std::int64_t lim2, const FreqVector& m,
                                  i128 target, const FreqVector* excluded) {
  if (target % 2 != 0) return 0;
  const i128 half = target / 2;
  const int j = pick_pivot(m);
  std::uint64_t count = 0;
  for_each_projected(center, lim2, j, [&](FreqVector& x, std::int64_t) {
    i128 rest = half;
    for (int i = 0; i < x.dim(); ++i) {
      if (i != j) rest -= static_cast<i128>(m[i]) * x[i];
    }
    if (rest % m[j] != 0) return;
    const i128 xj = rest / m[j];
    const i128 off = xj - center[j];
    if (off * off > lim2) return;
    x.set_unchecked(j, static_cast<std::int64_t>(xj));
    if (dist2(x, center) <= lim2 && !(excluded && x == *excluded)) ++count;
    x.set_unchecked(j, center[j]);
  });
  return count;
}

template <class Fn>
std::uint64_t sum_over(const std::vector<FreqVector>& points, Fn&& fn) {
  return parallel::chunked_reduce<std::uint64_t>(
      points.size(), 0,
      [&](std::size_t b, std::size_t e) {
        std::uint64_t acc = 0;
        for (std::size_t i = b; i < e; ++i) acc += fn(points[i]);
        return acc;
      },
      [](std::uint64_t& acc, std::uint64_t v) { acc += v; });
}

std::uint64_t count_number_a(const CountQuery& q) {
  const int d = q.d;
  const auto lim = ball_limit(q.R);
  const int skip = d - 1;
  std::uint64_t count = 0;
  if (q.mu_star < 0) return 0;
  for_each_projected(q.ball_center, lim, skip, [&](FreqVector& n, std::int64_t) {
    i128 r = q.mu_star;
    for (int i = 0; i < skip; ++i) {
      const i128 t = n[i] - q.n_star[i];
      r -= t * t;
    }
    std::int64_t root = 0;
    if (!is_square(r, root)) return;
    for (int s = 0; s < (root == 0 ? 1 : 2); ++s) {
      n.set_unchecked(skip, q.n_star[skip] + (s == 0 ? root : -root));
      if (dist2(n, q.ball_center) <= lim) ++count;
    }
    n.set_unchecked(skip, q.ball_center[skip]);
  });
  return count;
}

std::uint64_t count_number_b(const CountQuery& q) {
  const auto lim = ball_limit(q.R);
  std::uint64_t count = 0;
  if (q.mu_star < 0) return 0;
  // Solve for p (coordinate 0) given q.
  for_each_projected(q.ball_center, lim, 0, [&](FreqVector& pq, std::int64_t) {
    const i128 dq = pq[1] - q.n_star[1];
    const i128 r = static_cast<i128>(q.mu_star) - 3 * dq * dq;
    std::int64_t root = 0;
    if (!is_square(r, root)) return;
    for (int s = 0; s < (root == 0 ? 1 : 2); ++s) {
      pq.set_unchecked(0, q.n_star[0] + (s == 0 ? root : -root));
      if (dist2(pq, q.ball_center) <= lim) ++count;
    }
    pq.set_unchecked(0, q.ball_center[0]);
  });
  return count;
}

std::uint64_t count_c1_plus(const CountQuery& q) {
  const auto Rint = static_cast<std::int64_t>(std::floor(q.R));
  const std::int64_t ns = q.n_sub[0];
  const i128 nstar = q.n_star[0];
  std::uint64_t count = 0;
  for (std::int64_t a = -Rint; a <= Rint; ++a) {
    const std::int64_t n1 = ns + a;
    const std::int64_t budget = Rint - std::abs(a);
    // n2 + n3 = w, n2^2 + n3^2 = rho  =>  2 n2^2 - 2 w n2 + w^2 - rho = 0.
    const i128 w = nstar - n1;
    const i128 rho = static_cast<i128>(q.mu_star) - static_cast<i128>(n1) * n1;
    std::int64_t roots[2];
    const int nr = integer_roots(2, -2 * w, w * w - rho, roots);
    for (int i = 0; i < nr; ++i) {
      if (std::abs(roots[i]) <= budget) ++count;
    }
  }
  return count;
}

std::uint64_t count_cd_plus(const CountQuery& q) {
  const int d = q.d;
  const int skip = d - 1;
  const auto lim = ball_limit(q.R);
  std::uint64_t count = 0;
  for_each_projected(q.n_sub, lim, skip, [&](FreqVector& n1, std::int64_t) {
    i128 rest = 0;
    for (int i = 0; i < skip; ++i) {
      const i128 other = q.n_star[i] - n1[i];
      rest += static_cast<i128>(n1[i]) * n1[i] + other * other;
    }
    const i128 w = q.n_star[skip];
    std::int64_t roots[2];
    const int nr = integer_roots(2, -2 * w, w * w + rest - q.mu_star, roots);
    for (int i = 0; i < nr; ++i) {
      n1.set_unchecked(skip, roots[i]);
      if (dist2(n1, q.n_sub) <= lim) ++count;
    }
    n1.set_unchecked(skip, q.n_sub[skip]);
  });
  return count;
}

std::uint64_t count_cd_prime_plus(const CountQuery& q) {
  const int d = q.d;
  const int skip = d - 1;
  const auto lim2 = ball_limit(q.R2);
  const auto origin = FreqVector::zero(d);
  const auto outer = enumerate_ball(d, origin, q.R1);
  return sum_over(outer, [&](const FreqVector& n1) {
    std::uint64_t c = 0;
    const i128 base = static_cast<i128>(n1.norm2());
    for_each_projected(origin, lim2, skip, [&](FreqVector& n2, std::int64_t) {
      i128 rest = base;
      for (int i = 0; i < skip; ++i) {
        const i128 n3 = static_cast<i128>(q.n_star[i]) - n1[i] - n2[i];
        rest += static_cast<i128>(n2[i]) * n2[i] + n3 * n3;
      }
      const i128 w = static_cast<i128>(q.n_star[skip]) - n1[skip];
      std::int64_t roots[2];
      const int nr = integer_roots(2, -2 * w, w * w + rest - q.mu_star, roots);
      for (int i = 0; i < nr; ++i) {
        n2.set_unchecked(skip, roots[i]);
        if (n2.norm2() <= lim2) ++c;
      }
      n2.set_unchecked(skip, 0);
    });
    return c;
  });
}

std::uint64_t count_l1_minus(const CountQuery& q, bool second) {
  // second == false: |n1| + |n3| <= R, solve n3.  second == true: |n1| + |n2| <= R, solve n2.
  const auto Rint = static_cast<std::int64_t>(std::floor(q.R));
  const i128 nstar = q.n_star[0];
  const i128 mu = q.mu_star;
  std::uint64_t count = 0;
  for (std::int64_t n1 = -Rint; n1 <= Rint; ++n1) {
    const std::int64_t budget = Rint - std::abs(n1);
    if (!second) {
      // n2 = m + n3 with m = n1 - n*; 2 m n3 = n1^2 - m^2 - mu*. m = 0 forces n2 = n3.
      const i128 m = n1 - nstar;
      if (m == 0) continue;
      const i128 target = static_cast<i128>(n1) * n1 - m * m - mu;
      if (target % (2 * m) != 0) continue;
      const i128 n3 = target / (2 * m);
      if (n3 > budget || n3 < -budget) continue;
      if (n3 == nstar) continue;  // n2 = n1
      ++count;
    } else {
      // n3 = c + n2 with c = n* - n1; 2 c n2 = mu* - n1^2 - c^2. c = 0 forces n3 = n2.
      const i128 c = nstar - n1;
      if (c == 0) continue;
      const i128 target = mu - static_cast<i128>(n1) * n1 - c * c;
      if (target % (2 * c) != 0) continue;
      const i128 n2 = target / (2 * c);
      if (n2 > budget || n2 < -budget) continue;
      if (n2 == n1) continue;
      ++count;
    }
  }
  return count;
}

std::uint64_t count_ld_minus(const CountQuery& q) {
  // (2 n1 - n*) . n* = mu*  <=>  2 n1 . n* = mu* + |n*|^2.
  const auto lim = ball_limit(q.R);
  const i128 target = static_cast<i128>(q.mu_star) + q.n_star.norm2();
  return count_on_hyperplane(q.n_sub, lim, q.n_star, target, nullptr);
}

std::uint64_t count_ld_prime(const CountQuery& q, bool exclusions) {
  // n2 = m + n3 with m = n1 - n*:  2 m . n3 = |n1|^2 - |m|^2 - mu*.
  const int d = q.d;
  const auto origin = FreqVector::zero(d);
  const auto lim3 = ball_limit(q.R3);
  const auto outer = enumerate_ball(d, origin, q.R1);
  const auto inner_size = static_cast<std::uint64_t>(enumerate_ball(d, origin, q.R3).size());
  return sum_over(outer, [&](const FreqVector& n1) -> std::uint64_t {
    const FreqVector m = n1 - q.n_star;
    const i128 target = static_cast<i128>(n1.norm2()) - m.norm2() - q.mu_star;
    if (m.norm2() == 0) {
      // Every n3 works with n2 = n3; excluded when n2 != n3 is required.
      return (!exclusions && target == 0) ? inner_size : 0;
    }
    return count_on_hyperplane(origin, lim3, m, target, exclusions ? &q.n_star : nullptr);
  });
}

std::uint64_t count_ld_prime2(const CountQuery& q) {
  // n3 = c + n2 with c = n* - n1:  2 c . n2 = mu* - |n1|^2 - |c|^2; n2 != n1, c != 0.
  const int d = q.d;
  const auto origin = FreqVector::zero(d);
  const auto lim2 = ball_limit(q.R2);
  const auto outer = enumerate_ball(d, origin, q.R1);
  return sum_over(outer, [&](const FreqVector& n1) -> std::uint64_t {
    const FreqVector c = q.n_star - n1;
    if (c.norm2() == 0) return 0;
    const i128 target = static_cast<i128>(q.mu_star) - n1.norm2() - c.norm2();
    return count_on_hyperplane(origin, lim2, c, target, &n1);
  });
}

bool uses_R(LemmaTag t) {
  switch (t) {
    case LemmaTag::Cdprimeplus:
    case LemmaTag::Ldprime1:
    case LemmaTag::Ldprime2:
    case LemmaTag::Ldprime:
      return false;
    default:
      return true;
  }
}

void check_radius(double r, const char* name) {
  if (!std::isfinite(r)) {
    throw QueryError(std::string("radius ") + name + " must be finite: nothing bounds the enumeration");
  }
  if (!(r > 1.0)) throw ParameterError(std::string("radius ") + name + " must exceed 1");
}

}  // namespace

std::string_view to_string(LemmaTag tag) {
  switch (tag) {
    case LemmaTag::NumberA:
      return "NumberA";
    case LemmaTag::NumberB:
      return "NumberB";
    case LemmaTag::C1plus:
      return "C1plus";
    case LemmaTag::Cdplus:
      return "Cdplus";
    case LemmaTag::Cdprimeplus:
      return "Cdprimeplus";
    case LemmaTag::L1minus1:
      return "L1minus1";
    case LemmaTag::L1minus2:
      return "L1minus2";
    case LemmaTag::Ldminus:
      return "Ldminus";
    case LemmaTag::Ldprime1:
      return "Ldprime1";
    case LemmaTag::Ldprime2:
      return "Ldprime2";
    case LemmaTag::Ldprime:
      return "Ldprime";
  }
  return "?";
}

std::optional<LemmaTag> lemma_from_string(std::string_view name) {
  for (const auto t : kAllLemmas) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

bool lemma_supports_dimension(LemmaTag tag, int d) {
  switch (tag) {
    case LemmaTag::NumberB:
      return d == 2;
    case LemmaTag::C1plus:
    case LemmaTag::L1minus1:
    case LemmaTag::L1minus2:
      return d == 1;
    default:
      return d >= 2 && d <= FreqVector::kMaxDim;
  }
}

CountQuery CountQuery::make(LemmaTag tag, int d) {
  CountQuery q;
  q.tag = tag;
  q.d = d;
  q.n_star = FreqVector::zero(d);
  q.n_sub = FreqVector::zero(d);
  q.ball_center = FreqVector::zero(d);
  return q;
}

std::vector<FreqVector> enumerate_ball(int d, const FreqVector& center, double R) {
  if (center.dim() != d) throw DimensionError("enumerate_ball: center has wrong dimension");
  if (!(R > 0.0) || !std::isfinite(R)) throw ParameterError("enumerate_ball: R must be positive");
  check_ball_box(d, center, R);
  std::vector<FreqVector> out;
  for_each_projected(center, ball_limit(R), -1,
                     [&](const FreqVector& p, std::int64_t) { out.push_back(p); });
  return out;
}

void validate(const CountQuery& q) {
  if (!lemma_supports_dimension(q.tag, q.d)) {
    throw ParameterError(std::string(to_string(q.tag)) + " is not stated for d = " +
                         std::to_string(q.d));
  }
  for (const auto* v : {&q.n_star, &q.n_sub, &q.ball_center}) {
    if (v->dim() != q.d) throw DimensionError("count query vectors must have dimension d");
  }
  if (uses_R(q.tag)) {
    check_radius(q.R, "R");
  } else {
    check_radius(q.R1, "R1");
    if (q.tag == LemmaTag::Cdprimeplus || q.tag == LemmaTag::Ldprime2) {
      check_radius(q.R2, "R2");
    } else {
      check_radius(q.R3, "R3");
    }
  }
  if (q.tag == LemmaTag::Ldminus && q.n_star.norm2() == 0) {
    throw PreconditionError("Ldminus requires n* != 0");
  }
  switch (q.tag) {
    case LemmaTag::NumberA:
    case LemmaTag::NumberB:
      check_ball_box(q.d, q.ball_center, q.R);
      break;
    case LemmaTag::C1plus:
    case LemmaTag::Cdplus:
    case LemmaTag::Ldminus:
      check_ball_box(q.d, q.n_sub, q.R);
      break;
    default:
      break;
  }
}

std::uint64_t exact_count(const CountQuery& q) {
  validate(q);
  switch (q.tag) {
    case LemmaTag::NumberA:
      return count_number_a(q);
    case LemmaTag::NumberB:
      return count_number_b(q);
    case LemmaTag::C1plus:
      return count_c1_plus(q);
    case LemmaTag::Cdplus:
      return count_cd_plus(q);
    case LemmaTag::Cdprimeplus:
      return count_cd_prime_plus(q);
    case LemmaTag::L1minus1:
      return count_l1_minus(q, false);
    case LemmaTag::L1minus2:
      return count_l1_minus(q, true);
    case LemmaTag::Ldminus:
      return count_ld_minus(q);
    case LemmaTag::Ldprime1:
      return count_ld_prime(q, true);
    case LemmaTag::Ldprime2:
      return count_ld_prime2(q);
    case LemmaTag::Ldprime:
      return count_ld_prime(q, false);
  }
  throw QueryError("unknown lemma tag");
}

double theoretical_bound(const CountQuery& q, double eta, double C) {
  if (!(eta >= 0.0)) throw ParameterError("eta must be nonnegative");
  if (!(C > 0.0)) throw ParameterError("C must be positive");
  const double d = q.d;
  auto pw = [](double x, double e) { return std::pow(x, e); };
  switch (q.tag) {
    case LemmaTag::NumberA:
    case LemmaTag::Cdplus:
      return C * pw(q.R, d - 2 + eta);
    case LemmaTag::NumberB:
    case LemmaTag::C1plus:
    case LemmaTag::L1minus1:
    case LemmaTag::L1minus2:
      return C * pw(q.R, eta);
    case LemmaTag::Ldminus:
      return C * pw(q.R, d - 1);
    case LemmaTag::Cdprimeplus: {
      const double hi = std::max(q.R1, q.R2), lo = std::min(q.R1, q.R2);
      return C * pw(hi, d - 2 + eta) * pw(lo, d);
    }
    case LemmaTag::Ldprime1:
      return C * pw(q.R1, d - 1) * pw(q.R3, d - 1) * pw(std::max(q.R1, q.R3), eta);
    case LemmaTag::Ldprime2:
      return C * pw(q.R1, d - 1) * pw(q.R2, d - 1) * pw(std::max(q.R1, q.R2), eta);
    case LemmaTag::Ldprime: {
      const double hi = std::max(q.R1, q.R3), lo = std::min(q.R1, q.R3);
      return C * pw(hi, d) * pw(lo, d - 2 + eta);
    }
  }
  throw QueryError("unknown lemma tag");
}

CountReport count_constrained(const CountQuery& q, double eta, double C) {
  CountReport r;
  r.query = q;
  r.exact_count = exact_count(q);
  r.bound_value = theoretical_bound(q, eta, C);
  r.ratio = r.bound_value > 0 ? static_cast<double>(r.exact_count) / r.bound_value : 0.0;
  return r;
}

std::int64_t divisor_count(std::int64_t n) {
  if (n <= 0) throw ParameterError("divisor_count requires n >= 1");
  if (n > (std::int64_t{1} << 40)) throw ParameterError("divisor_count requires n <= 2^40");
  std::int64_t count = 0;
  for (std::int64_t m = 1; m * m <= n; ++m) {
    if (n % m == 0) count += (m * m == n) ? 1 : 2;
  }
  return count;
}

bool lcm_gcd_identity_check(std::int64_t a, std::int64_t b, std::int64_t c) {
  if (a < 1 || b < 1 || c < 1) throw ParameterError("lcm/gcd identity needs positive integers");
  using u128 = unsigned __int128;
  auto mul = [](u128 x, u128 y) {
    u128 r;
    if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("lcm/gcd identity overflows 128 bits");
    return r;
  };
  const auto gab = std::gcd(a, b), gac = std::gcd(a, c), gbc = std::gcd(b, c);
  const auto gabc = std::gcd(gab, c);
  // lcm(a,b,c) = lcm(lcm(a,b), c), computed without dividing the product.
  const u128 lab = mul(static_cast<u128>(a / gab), static_cast<u128>(b));
  const u128 g = std::gcd(static_cast<std::uint64_t>(lab % static_cast<u128>(c)),
                          static_cast<std::uint64_t>(c));
  const u128 labc = mul(lab / (g == 0 ? static_cast<u128>(c) : g), static_cast<u128>(c));
  const u128 lhs = mul(mul(mul(labc, static_cast<u128>(gab)), static_cast<u128>(gac)),
                       static_cast<u128>(gbc));
  const u128 rhs = mul(mul(mul(static_cast<u128>(a), static_cast<u128>(b)), static_cast<u128>(c)),
                       static_cast<u128>(gabc));
  return lhs == rhs;
}

namespace {

class QuerySampler {
 public:
  QuerySampler(LemmaTag tag, int d, double R, std::mt19937_64& rng)
      : tag_(tag), d_(d), R_(R), rng_(rng), reach_(static_cast<std::int64_t>(std::floor(R))) {}

  CountQuery attainable() {
    CountQuery q = base();
    const auto origin = FreqVector::zero(d_);
    switch (tag_) {
      case LemmaTag::NumberA: {
        q.ball_center = box(reach_);
        q.n_star = q.ball_center + box(2 * reach_);
        const auto n = in_ball(q.ball_center);
        q.mu_star = (n - q.n_star).norm2();
        break;
      }
      case LemmaTag::NumberB: {
        q.ball_center = box(reach_);
        q.n_star = q.ball_center + box(2 * reach_);
        const auto pq = in_ball(q.ball_center);
        const auto dp = pq[0] - q.n_star[0], dq = pq[1] - q.n_star[1];
        q.mu_star = dp * dp + 3 * dq * dq;
        break;
      }
      case LemmaTag::C1plus: {
        q.n_sub = box(reach_);
        const auto [a, b] = diamond();
        const std::int64_t n1 = q.n_sub[0] + a, n2 = b, n3 = uniform(-2 * reach_, 2 * reach_);
        q.n_star = FreqVector{n1 + n2 + n3};
        q.mu_star = n1 * n1 + n2 * n2 + n3 * n3;
        break;
      }
      case LemmaTag::Cdplus: {
        q.n_sub = box(reach_);
        const auto n1 = in_ball(q.n_sub);
        const auto n2 = box(2 * reach_);
        q.n_star = n1 + n2;
        q.mu_star = n1.norm2() + n2.norm2();
        break;
      }
      case LemmaTag::Cdprimeplus: {
        const auto n1 = in_ball(origin), n2 = in_ball(origin), n3 = box(2 * reach_);
        q.n_star = n1 + n2 + n3;
        q.mu_star = n1.norm2() + n2.norm2() + n3.norm2();
        break;
      }
      case LemmaTag::L1minus1:
      case LemmaTag::L1minus2: {
        const auto [a, b] = diamond();
        const std::int64_t free = uniform(-2 * reach_, 2 * reach_);
        const std::int64_t n1 = a;
        const std::int64_t n2 = tag_ == LemmaTag::L1minus1 ? free : b;
        const std::int64_t n3 = tag_ == LemmaTag::L1minus1 ? b : free;
        q.n_star = FreqVector{n1 - n2 + n3};
        q.mu_star = n1 * n1 - n2 * n2 + n3 * n3;
        break;
      }
      case LemmaTag::Ldminus: {
        q.n_sub = box(reach_);
        const auto n1 = in_ball(q.n_sub);
        FreqVector n2 = box(2 * reach_);
        while (n2 == n1) n2 = box(2 * reach_);
        q.n_star = n1 - n2;
        q.mu_star = n1.norm2() - n2.norm2();
        break;
      }
      case LemmaTag::Ldprime1:
      case LemmaTag::Ldprime:
      case LemmaTag::Ldprime2: {
        const auto n1 = in_ball(origin);
        const auto bounded = in_ball(origin);
        const auto free = box(2 * reach_);
        const bool second = tag_ == LemmaTag::Ldprime2;
        const auto& n2 = second ? bounded : free;
        const auto& n3 = second ? free : bounded;
        q.n_star = n1 - n2 + n3;
        q.mu_star = n1.norm2() - n2.norm2() + n3.norm2();
        break;
      }
    }
    return q;
  }

  CountQuery uniform_level() {
    CountQuery q = attainable();
    const std::int64_t span = 3 * std::max<std::int64_t>(reach_, 1);
    const std::int64_t top = 3 * d_ * span * span;
    const bool definite = tag_ == LemmaTag::NumberA || tag_ == LemmaTag::NumberB ||
                          tag_ == LemmaTag::C1plus || tag_ == LemmaTag::Cdplus ||
                          tag_ == LemmaTag::Cdprimeplus;
    q.mu_star = uniform(definite ? 0 : -top, top);
    if (tag_ == LemmaTag::Ldminus && q.n_star.norm2() == 0) q.n_star.set_unchecked(0, 1);
    return q;
  }

  CountQuery jarnik() {
    CountQuery q = base();
    q.ball_center = box(reach_);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double theta = 2.0 * M_PI * unit(rng_);
    const double scale = std::pow(10.0 * R_, 3);
    const double dist = scale * (1.0 + unit(rng_)) + 2.0 * R_ + 2.0;
    const FreqVector offset{std::llround(dist * std::cos(theta)), std::llround(dist * std::sin(theta))};
    q.n_star = q.ball_center - offset;
    const auto m = in_ball(q.ball_center);
    q.mu_star = (m - q.n_star).norm2();
    return q;
  }

 private:
  CountQuery base() const {
    CountQuery q = CountQuery::make(tag_, d_);
    q.R = q.R1 = q.R2 = q.R3 = R_;
    return q;
  }

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  FreqVector box(std::int64_t r) {
    FreqVector v = FreqVector::zero(d_);
    for (int i = 0; i < d_; ++i) v.set_unchecked(i, uniform(-r, r));
    return v;
  }

  FreqVector in_ball(const FreqVector& center) {
    const auto lim = ball_limit(R_);
    while (true) {
      FreqVector off = box(reach_);
      if (off.norm2() <= lim) return center + off;
    }
  }

  std::pair<std::int64_t, std::int64_t> diamond() {
    const std::int64_t a = uniform(-reach_, reach_);
    const std::int64_t room = reach_ - std::abs(a);
    return {a, uniform(-room, room)};
  }

  LemmaTag tag_;
  int d_;
  double R_;
  std::mt19937_64& rng_;
  std::int64_t reach_;
};

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] > 0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  if (lx.size() < 2) return std::nan("");
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : std::nan("");
}

}  // namespace

ScanResult scan_worst_case(LemmaTag tag, int d, std::span<const double> R_grid,
                           std::size_t sample_budget, std::uint64_t seed, double eta,
                           ScanRegime regime) {
  if (R_grid.empty()) throw ParameterError("scan_worst_case: empty radius grid");
  if (!lemma_supports_dimension(tag, d)) {
    throw ParameterError(std::string(to_string(tag)) + " is not stated for d = " + std::to_string(d));
  }
  if (regime == ScanRegime::Jarnik && (tag != LemmaTag::NumberA || d != 2)) {
    throw ParameterError("the Jarnik regime applies to NumberA with d = 2");
  }
  ScanResult result;
  if (sample_budget == 0) {
    result.slope = std::nan("");
    return result;
  }

  std::mt19937_64 rng(seed);
  std::vector<double> xs, ys;
  for (const double R : R_grid) {
    if (!(R > 1.0) || !std::isfinite(R)) throw ParameterError("scan radii must be finite and > 1");
    QuerySampler sampler(tag, d, R, rng);
    std::vector<CountQuery> queries;
    queries.reserve(sample_budget);
    for (std::size_t i = 0; i < sample_budget; ++i) {
      if (regime == ScanRegime::Jarnik) {
        queries.push_back(sampler.jarnik());
      } else {
        queries.push_back(i % 2 == 0 ? sampler.attainable() : sampler.uniform_level());
      }
    }
    std::vector<std::uint64_t> counts(queries.size());
    parallel::for_each_chunk(
        queries.size(),
        [&](std::size_t, std::size_t b, std::size_t e) {
          for (std::size_t i = b; i < e; ++i) counts[i] = exact_count(queries[i]);
        },
        1);
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
      if (counts[i] > counts[best]) best = i;
    }
    CountReport row;
    row.query = queries[best];
    row.exact_count = counts[best];
    row.bound_value = theoretical_bound(row.query, eta, 1.0);
    row.ratio = row.bound_value > 0 ? static_cast<double>(row.exact_count) / row.bound_value : 0.0;
    result.rows.push_back(row);
    result.all_counts.insert(result.all_counts.end(), counts.begin(), counts.end());
    xs.push_back(R);
    ys.push_back(static_cast<double>(row.exact_count));
  }
  result.slope = fit_loglog_slope(xs, ys);
  return result;
}

}  // namespace nlslab::counting
