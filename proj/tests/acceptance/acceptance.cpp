// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
// `acceptance --pilot` prints the dyadic pilot maximum instead of asserting it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "../support/counting_oracle.hpp"
#include "../support/fields.hpp"
#include "nlslab/counting.hpp"
#include "nlslab/estimates.hpp"
#include "nlslab/extremizer.hpp"
#include "nlslab/lattice.hpp"
#include "nlslab/multilinear.hpp"
#include "nlslab/spectral_flow.hpp"

using namespace nlslab;

namespace {

// Recorded once with --pilot: the largest lhs/bound over the 50 dyadic
// configurations (seed 8) was 1.075807. Asserted from now on with headroom.
constexpr double kDyadicPilotConstant = 1.10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

// 1. count_constrained against the naive oracle in both traversal orders.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(1);
  std::size_t mismatches = 0, total = 0, nonzero = 0;
  for (const auto tag : counting::kAllLemmas) {
    for (int rep = 0; rep < 500; ++rep) {
      const auto q = oracle::random_query(tag, rng, 8.0);
      const auto fwd = oracle::count(q, false);
      const auto rev = oracle::count(q, true);
      const auto got = counting::count_constrained(q).exact_count;
      mismatches += fwd != rev || got != fwd;
      nonzero += fwd > 0;
      ++total;
    }
  }
  return {mismatches == 0, fmt("%zu queries, %zu nonzero, %zu mismatches", total, nonzero, mismatches)};
}

// 2. Sphere fixtures, confirmed by the oracle first.
Outcome sphere_fixtures() {
  auto a = counting::CountQuery::make(counting::LemmaTag::NumberA, 2);
  a.mu_star = 25;
  a.R = 6;
  auto b = counting::CountQuery::make(counting::LemmaTag::NumberB, 2);
  b.mu_star = 4;
  b.R = 3;
  const auto ca = counting::count_constrained(a).exact_count;
  const auto cb = counting::count_constrained(b).exact_count;
  const bool ok = oracle::count(a, false) == 12 && oracle::count(b, false) == 6 && ca == 12 && cb == 6;
  return {ok, fmt("NumberA=%llu (want 12), NumberB=%llu (want 6)", static_cast<unsigned long long>(ca),
                  static_cast<unsigned long long>(cb))};
}

// 3. Jarnik regime: far-away balls on huge circles hold at most two points.
Outcome jarnik() {
  const double grid[] = {4, 8, 16};
  const auto res = counting::scan_worst_case(counting::LemmaTag::NumberA, 2, grid, 100, 3, 0.25,
                                             counting::ScanRegime::Jarnik);
  std::uint64_t worst = 0;
  for (const auto c : res.all_counts) worst = std::max(worst, c);
  bool ok = res.all_counts.size() == 300 && worst <= 2;
  for (const auto& row : res.rows) {
    ok = ok && static_cast<double>(row.query.mu_star) > std::pow(10.0 * row.query.R, 6);
    ok = ok && oracle::count(row.query, false) == row.exact_count;
  }
  return {ok, fmt("%zu configurations over R in {4,8,16}, max count %llu", res.all_counts.size(),
                  static_cast<unsigned long long>(worst))};
}

// 4. lcm/gcd identity.
Outcome lcm_gcd() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> u(1, 1'000'000);
  std::size_t bad = 0;
  for (int i = 0; i < 10'000; ++i) bad += !counting::lcm_gcd_identity_check(u(rng), u(rng), u(rng));
  return {bad == 0, fmt("10000 triples, %zu failures", bad)};
}

// 5. Partition and splitting identities, PairTable against naive.
Outcome identities() {
  using namespace multilinear;
  std::mt19937_64 rng(5);
  const std::pair<int, int> dk[] = {{1, 2}, {2, 1}, {2, 2}};
  std::size_t failures = 0, cells = 0;
  for (int set = 0; set < 100; ++set) {
    const auto [d, k] = dk[set % 3];
    const std::int64_t box = (d == 2 && k == 2) ? 1 + static_cast<std::int64_t>(rng() % 2)
                                                : 1 + static_cast<std::int64_t>(rng() % 3);
    std::vector<SpectralField> f;
    for (int l = 0; l < 2 * k + 1; ++l) f.push_back(testing_fields::integer_field(d, box, rng));

    const auto none = resonance_levels(f);
    const auto naive = reference::naive_levels(f, {});
    bool ok = none.size() == naive.size();
    for (std::size_t i = 0; ok && i < none.size(); ++i) {
      ok = none[i].n == naive[i].n && none[i].mu == naive[i].mu && none[i].value == naive[i].value &&
           none[i].count == naive[i].count;
    }
    // Sum over mu against the convolution.
    const auto conv = signed_convolution(f);
    const auto conv_naive = signed_convolution(f, EvalMode::Naive);
    std::map<FreqVector, Amplitude> by_n;
    for (const auto& e : none) by_n[e.n] += e.value;
    for (const auto& [n, v] : conv) ok = ok && by_n[n] == v && conv_naive.at(n) == v;
    for (const auto& [n, v] : by_n) ok = ok && conv.at(n) == v;
    // A and A^c split every cell.
    std::map<std::pair<FreqVector, ResonanceLevel>, Amplitude> split;
    for (const auto r : {Restriction::OnA, Restriction::OnAc}) {
      for (const auto& e : resonance_levels(f, {.restriction = r})) split[{e.n, e.mu}] += e.value;
      const auto nr = reference::naive_levels(f, {.restriction = r});
      const auto pr = resonance_levels(f, {.restriction = r});
      ok = ok && nr.size() == pr.size();
      for (std::size_t i = 0; ok && i < pr.size(); ++i) ok = pr[i].value == nr[i].value && pr[i].mu == nr[i].mu;
    }
    ok = ok && split.size() == none.size();
    for (const auto& e : none) ok = ok && split[{e.n, e.mu}] == e.value;
    // Direct resonant_sum calls on a few levels.
    for (std::size_t i = 0; i < none.size(); i += none.size() / 3 + 1) {
      const auto mu = none[i].mu;
      const auto a = resonant_sum(f, mu, Restriction::OnA);
      const auto ac = resonant_sum(f, mu, Restriction::OnAc);
      const auto all = resonant_sum(f, mu, Restriction::None);
      const auto all_naive = resonant_sum(f, mu, Restriction::None, std::nullopt, EvalMode::Naive);
      for (const auto& [n, v] : all) ok = ok && a.at(n) + ac.at(n) == v && all_naive.at(n) == v;
      for (const auto& [n, v] : all_naive) ok = ok && all.at(n) == v;
    }
    cells += none.size();
    failures += !ok;
  }
  return {failures == 0, fmt("100 field sets, %zu (n,mu) cells, %zu failing sets", cells, failures)};
}

// Independent count of the counterexample LHS at n = 0, mu = 0 over A^c.
double counterexample_lhs_naive(std::int64_t N) {
  double total = 0;
  for (std::int64_t a = -N; a <= N; ++a) {
    for (std::int64_t b = -N; b <= N; ++b) {
      // n1 = (a,0), n3 = (0,b), n2 = n1 + n3 - n = (a,b).
      const FreqVector n1{a, 0}, n2{a, b}, n3{0, b};
      if (n2 == n1 || n2 == n3) continue;
      const std::vector<FreqVector> e{n1, n2, n3};
      total += phi(FreqVector{0, 0}, e) == 0;
    }
  }
  return total;
}

// 6. Growth of the l^inf ratio on the counterexample family.
Outcome counterexample_growth() {
  std::vector<double> Ns, ratios;
  bool lhs_ok = true;
  std::string detail;
  for (const std::int64_t N : {4, 8, 16, 32}) {
    const auto ce = estimates::counterexample_family(N);
    auto spec = estimates::EstimateSpec::derive(estimates::EstimateTag::LinfBlock, 2, 1, 0.25);
    spec.q = ce.q;
    spec.mu = ce.mu;
    const auto sides = estimates::estimate_sides(spec, ce.fields);
    if (N <= 8) lhs_ok = lhs_ok && sides.lhs == counterexample_lhs_naive(N) && sides.lhs == 4.0 * N * N;
    Ns.push_back(static_cast<double>(N));
    ratios.push_back(sides.lhs / sides.rhs);
    detail += fmt("N=%lld:%.4f ", static_cast<long long>(N), sides.lhs / sides.rhs);
  }
  const double s = slope(Ns, ratios);
  return {lhs_ok && s >= 0.4 && s <= 0.6, detail + fmt("slope %.4f (want [0.4, 0.6])", s)};
}

// 7. Hill climb on (B1) at d=2, k=1, s=0.6.
Outcome b1_boundedness() {
  const auto spec = estimates::EstimateSpec::derive(estimates::EstimateTag::B1, 2, 1, 0.6);
  std::vector<double> Ns, best;
  std::string detail;
  for (const std::int64_t N : {4, 8, 16}) {
    const auto res = estimates::extremizer_search(spec, N, 2000, 7);
    Ns.push_back(static_cast<double>(N));
    best.push_back(res.best_ratio);
    detail += fmt("N=%lld:%.4f ", static_cast<long long>(N), res.best_ratio);
  }
  const double s = slope(Ns, best);
  return {s <= 0.1, detail + fmt("slope %.4f (want <= 0.1)", s)};
}

// Naive (2k+2)-linear sum for k = 1 with a dense lookup of the last field.
double dyadic_lhs_naive(const std::vector<SpectralField>& f, ResonanceLevel mu) {
  const std::int64_t R = f[3].box_radius();
  const std::int64_t side = 2 * R + 1;
  std::vector<double> last(static_cast<std::size_t>(side * side), 0.0);
  for (const auto& [n, v] : f[3]) last[static_cast<std::size_t>((n[0] + R) * side + n[1] + R)] = v.real();
  double total = 0;
  for (const auto& [n0, v0] : f[0])
    for (const auto& [n1, v1] : f[1])
      for (const auto& [n2, v2] : f[2]) {
        const FreqVector n3 = n0 - n1 + n2;
        if (std::abs(n3[0]) > R || std::abs(n3[1]) > R) continue;
        const double v3 = last[static_cast<std::size_t>((n3[0] + R) * side + n3[1] + R)];
        if (v3 == 0.0) continue;
        if (n0.norm2() - n1.norm2() + n2.norm2() - n3.norm2() != mu) continue;
        total += v0.real() * v1.real() * v2.real() * v3;
      }
  return total;
}

// 8. Dyadic block check against the recorded pilot constant.
Outcome dyadic(bool pilot) {
  std::mt19937_64 rng(8);
  const std::int64_t sizes[] = {1, 2, 4, 8};
  double worst = 0;
  std::size_t disagree = 0;
  for (int c = 0; c < 50; ++c) {
    std::vector<std::int64_t> shells(4);
    for (auto& N : shells) N = sizes[rng() % 4];
    std::vector<SpectralField> f;
    for (const auto N : shells) {
      SpectralField g(2, 2 * N);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (const auto& n : testing_fields::box_points(2, 2 * N)) {
        const double jb = japanese_bracket(n);
        const double v = u(rng);
        if (jb >= static_cast<double>(N) && jb < 2.0 * static_cast<double>(N)) g.set(n, v);
      }
      f.push_back(std::move(g));
    }
    const std::int64_t nmax = *std::max_element(shells.begin(), shells.end());
    const ResonanceLevel mu =
        rng() % 2 ? 0 : std::uniform_int_distribution<ResonanceLevel>(-2 * nmax * nmax, 2 * nmax * nmax)(rng);
    const auto res = estimates::dyadic_block_check(shells, mu, 0.6, f);
    const double naive = dyadic_lhs_naive(f, mu);
    disagree += std::abs(naive - res.lhs) > 1e-10 * std::max(1.0, naive);
    worst = std::max(worst, naive / res.bound);
  }
  if (pilot) std::printf("pilot: max lhs/bound over 50 configurations = %.6f\n", worst);
  return {disagree == 0 && worst <= kDyadicPilotConstant,
          fmt("max lhs/bound %.4f (pilot constant %.2f), %zu lhs disagreements with naive sum", worst,
              kDyadicPilotConstant, disagree)};
}

SpectralField gaussian(int d, std::int64_t N, double amp) {
  SpectralField f(d, N);
  for (const auto& n : testing_fields::box_points(d, N)) {
    f.set(n, std::polar(amp * std::exp(-0.5 * static_cast<double>(n.norm2())), 0.5 * static_cast<double>(n[0])));
  }
  return f;
}

double mass(const SpectralField& f) { return flow::observables(f, 0.0).mass; }

// 9. Mass drift of the full Galerkin flow and its decay under dt -> dt/2.
Outcome mass_conservation() {
  flow::FlowParams p;
  p.d = 1;
  p.k = 1;
  p.box_radius = 4;
  p.lambda = 1.0;
  const auto w = gaussian(1, 4, 1.0);
  const double m0 = mass(w);
  const double d1 = std::abs(mass(flow::evolve(w, 0.1, 1e-3, p, 1u << 30).back().omega) - m0) / m0;
  const double d2 = std::abs(mass(flow::evolve(w, 0.1, 5e-4, p, 1u << 30).back().omega) - m0) / m0;
  return {d1 <= 1e-8 && d1 >= 12.0 * d2,
          fmt("drift %.3e at dt=1e-3, %.3e at dt=5e-4, shrink factor %.2f (want drift <= 1e-8, factor >= 12)", d1,
              d2, d1 / d2)};
}

// 10. Self-convergence order of RK4 at d=1, k=2.
Outcome integrator_order() {
  flow::FlowParams p;
  p.d = 1;
  p.k = 2;
  p.box_radius = 4;
  const auto w = gaussian(1, 4, 1.0);
  std::vector<SpectralField> end;
  for (int j = 8; j <= 11; ++j) end.push_back(flow::evolve(w, 1.0, std::ldexp(1.0, -j), p, 1u << 30).back().omega);
  std::vector<double> dts, errs;
  for (int j = 0; j < 3; ++j) {
    dts.push_back(std::ldexp(1.0, -8 - j));
    errs.push_back(flow::observables([&] {
                     SpectralField diff(1, 4);
                     for (const auto& [n, v] : end[j]) diff.add(n, v);
                     for (const auto& [n, v] : end[j + 1]) diff.add(n, -v);
                     return diff;
                   }(), 0.0).sobolev);
  }
  const double order = slope(dts, errs);
  return {std::abs(order - 4.0) <= 0.3,
          fmt("errors %.3e %.3e %.3e, observed order %.3f (want 4.0 +- 0.3)", errs[0], errs[1], errs[2],
              order)};
}

// 11. Classifier fixtures and invariance under every permutation of the entries.
Outcome classifier() {
  const auto cls = [](std::vector<FreqVector> e, int d, int k) { return rank_and_classify(FreqTuple(e), d, k).cls; };
  bool fixtures = cls({{3, 0}, {3, 0}, {5, 5}}, 2, 1) == ExceptionalClass::InACubic;
  fixtures = fixtures && cls({{1, 2, 3}, {0, 0, 1}, {4, 0, 0}, {1, 2, 3}, {1, 2, 3}}, 3, 2) == ExceptionalClass::NotInA;
  fixtures = fixtures && cls({{2, 0}, {4, 0}, {2, 0}, {1, 0}, {3, 0}}, 2, 2) == ExceptionalClass::InA3;

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> c(-2, 2);
  std::string detail = fixtures ? "fixtures ok; " : "fixtures FAILED; ";
  bool invariant = true;
  for (const auto [d, k] : {std::pair{2, 1}, {3, 2}, {1, 2}, {2, 2}}) {
    std::size_t violations = 0;
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<FreqVector> e;
      for (int i = 0; i < 2 * k + 1; ++i) {
        std::vector<std::int64_t> v(static_cast<std::size_t>(d));
        for (auto& x : v) x = c(rng);
        e.emplace_back(std::span<const std::int64_t>(v));
      }
      const auto base = cls(e, d, k);
      std::vector<int> perm(e.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
      bool same = true;
      do {
        std::vector<FreqVector> p;
        for (const int i : perm) p.push_back(e[static_cast<std::size_t>(i)]);
        same = same && cls(p, d, k) == base;
      } while (std::next_permutation(perm.begin(), perm.end()));
      violations += !same;
    }
    invariant = invariant && violations == 0;
    detail += fmt("(d,k)=(%d,%d): %zu/200 tuples not invariant; ", d, k, violations);
  }
  return {fixtures && invariant, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const bool pilot = argc > 1 && std::strcmp(argv[1], "--pilot") == 0;
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "counting oracle equivalence", 120, oracle_equivalence},
      {2, "sphere count fixtures", 0, sphere_fixtures},
      {3, "Jarnik sparsity", 60, jarnik},
      {4, "lcm-gcd identity", 0, lcm_gcd},
      {5, "partition and splitting identities", 0, identities},
      {6, "counterexample growth", 300, counterexample_growth},
      {7, "B1 boundedness probe", 0, b1_boundedness},
      {8, "dyadic block pilot bound", 0, [pilot] { return dyadic(pilot); }},
      {9, "mass conservation", 60, mass_conservation},
      {10, "integrator order", 0, integrator_order},
      {11, "classifier fixtures and invariance", 0, classifier},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail += fmt("; runtime %.1fs exceeds %.0fs", secs, c.limit_s);
    }
    failed += !o.pass;
    std::printf("%s %2d %-36s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
