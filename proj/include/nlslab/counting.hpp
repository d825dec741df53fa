#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nlslab/lattice.hpp"

namespace nlslab::counting {

/// The lattice-counting statements with an exact counter.
///
///   NumberA      #{n in Z^d : |n-n*|^2 = mu*, n in B_R(center)}             <= C R^{d-2+eta}
///   NumberB      #{(p,q) : (p-p*)^2 + 3(q-q*)^2 = mu*, (p,q) in B_R(center)} <= C R^eta
///   C1plus       n1+n2+n3 = n*, n1^2+n2^2+n3^2 = mu*, |n1-n_*|+|n2| <= R     <= C R^eta
///   Cdplus       n1+n2 = n*, |n1|^2+|n2|^2 = mu*, |n1-n_*| <= R              <= C R^{d-2+eta}
///   Cdprimeplus  n1+n2+n3 = n*, sum |ni|^2 = mu*, |n1|<=R1, |n2|<=R2
///   L1minus1     n1-n2+n3 = n*, n1^2-n2^2+n3^2 = mu*, n2!=n1,n3, |n1|+|n3|<=R
///   L1minus2     as L1minus1 with |n1|+|n2| <= R
///   Ldminus      n1-n2 = n* != 0, |n1|^2-|n2|^2 = mu*, |n1-n_*| <= R        <= C R^{d-1}
///   Ldprime1     n1-n2+n3 = n*, |n1|^2-|n2|^2+|n3|^2 = mu*, n2!=n1,n3, |n1|<=R1, |n3|<=R3
///   Ldprime2     as Ldprime1 with |n1|<=R1, |n2|<=R2
///   Ldprime      as Ldprime1 without the exclusions
enum class LemmaTag {
  NumberA,
  NumberB,
  C1plus,
  Cdplus,
  Cdprimeplus,
  L1minus1,
  L1minus2,
  Ldminus,
  Ldprime1,
  Ldprime2,
  Ldprime,
};

inline constexpr LemmaTag kAllLemmas[] = {
    LemmaTag::NumberA,  LemmaTag::NumberB,  LemmaTag::C1plus,   LemmaTag::Cdplus,
    LemmaTag::Cdprimeplus, LemmaTag::L1minus1, LemmaTag::L1minus2, LemmaTag::Ldminus,
    LemmaTag::Ldprime1, LemmaTag::Ldprime2, LemmaTag::Ldprime,
};

std::string_view to_string(LemmaTag tag);
std::optional<LemmaTag> lemma_from_string(std::string_view name);

/// Dimensions a lemma is stated for: d = 1 only, d = 2 only, or d >= 2.
bool lemma_supports_dimension(LemmaTag tag, int d);

struct CountQuery {
  LemmaTag tag = LemmaTag::NumberA;
  int d = 2;
  FreqVector n_star;       // n*, or (p*, q*) for NumberB
  FreqVector n_sub;        // n_*, center of the C1plus/Cdplus/Ldminus constraint
  FreqVector ball_center;  // center of B_R for NumberA/NumberB
  std::int64_t mu_star = 0;
  double R = 2.0;
  double R1 = 2.0;
  double R2 = 2.0;
  double R3 = 2.0;

  /// A query with all vectors set to the origin of Z^d.
  static CountQuery make(LemmaTag tag, int d);
};

struct CountReport {
  CountQuery query;
  std::uint64_t exact_count = 0;
  double bound_value = 0.0;
  double ratio = 0.0;
};

/// Lattice points with |n - center| <= R in lexicographic order.
std::vector<FreqVector> enumerate_ball(int d, const FreqVector& center, double R);

/// Checks tag-specific preconditions; throws on violation.
void validate(const CountQuery& q);

/// Exact size of the solution set named by the query.
std::uint64_t exact_count(const CountQuery& q);

/// Exact count plus the lemma's right-hand side with constant C.
CountReport count_constrained(const CountQuery& q, double eta = 0.25, double C = 1.0);

/// The lemma's right-hand side evaluated with the query's d and radii.
double theoretical_bound(const CountQuery& q, double eta, double C);

/// Number of positive divisors of n, 1 <= n <= 2^40.
std::int64_t divisor_count(std::int64_t n);

/// Evaluates lcm(a,b,c) gcd(a,b) gcd(a,c) gcd(b,c) and abc gcd(a,b,c)
/// exactly in 128-bit arithmetic and reports whether they agree.
bool lcm_gcd_identity_check(std::int64_t a, std::int64_t b, std::int64_t c);

enum class ScanRegime {
  Mixed,   // attainable and uniform mu* values, configurations near the balls
  Jarnik,  // NumberA, d = 2, mu* > (10R)^6 with the ball far from n*
};

struct ScanResult {
  std::vector<CountReport> rows;  // one per radius: the sample with the largest count
  double slope = 0.0;             // least-squares slope of log(max count) vs log R
  std::vector<std::uint64_t> all_counts;  // every sampled count, in sample order
};

/// Empirical worst-case probe: for each R, draws `sample_budget` seeded
/// queries, counts each exactly and keeps the largest. Deterministic for a
/// given seed regardless of the thread count.
ScanResult scan_worst_case(LemmaTag tag, int d, std::span<const double> R_grid,
                           std::size_t sample_budget, std::uint64_t seed, double eta = 0.25,
                           ScanRegime regime = ScanRegime::Mixed);

}  // namespace nlslab::counting
