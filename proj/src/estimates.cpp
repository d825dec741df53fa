#include "nlslab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "nlslab/errors.hpp"

namespace nlslab::estimates {

namespace {

void check_dk(int d, int k) {
  if (d < 1 || d > FreqVector::kMaxDim) throw DimensionError("d must lie in 1..4");
  if (k < 1) throw ParameterError("k must be positive");
  if (d == 1 && k == 1) throw UnsupportedCase("the estimates are not stated for (d,k) = (1,1)");
}

bool same(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}

double weight(const FreqVector& n, double p, double s) {
  if (s == 0.0) return 1.0;
  return std::pow(1.0 + static_cast<double>(n.norm2()), 0.5 * p * s);
}

}  // namespace

double critical_exponent(int d, int k) { return 0.5 * d - 1.0 / k; }

double embedding_exponent(int d, int k) {
  return static_cast<double>(d) * (2 * k - 1) / (2.0 * (2 * k + 1));
}

double epsilon_k(int k) {
  if (k < 1) throw ParameterError("k must be positive");
  const double kk = k;
  const double a = 1.0 / (kk * (2 * kk + 1));
  const double b = 3.0 / 5.0 - 9.0 / 16.0;
  const double c = (2 * kk + 3) / (4 * kk * (2 * kk + 1));
  const double e = 3.0 / 10.0 - 1.0 / 6.0;
  return 0.5 * std::min({a, b, c, e});
}

ParamRegime param_regime(int d, int k) {
  check_dk(d, k);
  if (d * k >= 2 * k + 2) return ParamRegime::HighDim;
  if (k == 1) return ParamRegime::Cubic;
  return ParamRegime::LowDim;
}

RegimeParams regime_parameters(int d, int k, double s) {
  const double sc = critical_exponent(d, k);
  switch (param_regime(d, k)) {
    case ParamRegime::HighDim:
      return {(s + sc) / 2, 2.0, -sc};
    case ParamRegime::LowDim:
      return {std::max((s + sc) / 2, embedding_exponent(d, k) - epsilon_k(k) / 2), kInfinity, 0.0};
    case ParamRegime::Cubic:
      return {(s + (3.0 * d - 2) / 10) / 2, 10.0 / (2 * d - 3), -(2.0 * d - 3) * (d - 2) / 10};
  }
  return {};
}

std::string_view to_string(EstimateTag t) {
  switch (t) {
    case EstimateTag::B1:
      return "B1";
    case EstimateTag::B1prime:
      return "B1prime";
    case EstimateTag::R:
      return "R";
    case EstimateTag::B2:
      return "B2";
    case EstimateTag::B2prime:
      return "B2prime";
    case EstimateTag::B3:
      return "B3";
    case EstimateTag::DyadicBlock:
      return "DyadicBlock";
    case EstimateTag::LinfBlock:
      return "LinfBlock";
  }
  return "?";
}

std::optional<EstimateTag> estimate_tag_from_string(std::string_view name) {
  for (const auto t : {EstimateTag::B1, EstimateTag::B1prime, EstimateTag::R, EstimateTag::B2,
                       EstimateTag::B2prime, EstimateTag::B3, EstimateTag::DyadicBlock,
                       EstimateTag::LinfBlock}) {
    if (to_string(t) == name) return t;
  }
  if (name == "R_est") return EstimateTag::R;
  return std::nullopt;
}

EstimateSpec EstimateSpec::derive(EstimateTag tag, int d, int k, double s) {
  check_dk(d, k);
  if (!std::isfinite(s)) throw ParameterError("s must be finite");
  EstimateSpec spec;
  spec.tag = tag;
  spec.d = d;
  spec.k = k;
  spec.s = s;
  const auto row = regime_parameters(d, k, s);
  spec.s1 = row.s1;
  spec.s2 = std::max(0.5 * d, s) + 1.0;
  spec.r = 2.0;
  spec.sigma = 0.0;
  switch (tag) {
    case EstimateTag::B1:
      // Any s1 > s_c is admissible here; the midpoint is used in every regime.
      spec.s1 = (s + critical_exponent(d, k)) / 2;
      break;
    case EstimateTag::B1prime:
    case EstimateTag::DyadicBlock:
      break;
    case EstimateTag::R:
      spec.restriction = Restriction::OnA;
      break;
    case EstimateTag::B2:
    case EstimateTag::B2prime:
    case EstimateTag::B3:
      spec.r = row.r;
      spec.sigma = row.sigma;
      spec.restriction = Restriction::OnAc;
      break;
    case EstimateTag::LinfBlock:
      spec.r = kInfinity;
      spec.restriction = Restriction::OnAc;
      break;
  }
  return spec;
}

void validate(const EstimateSpec& spec) {
  const auto ref = EstimateSpec::derive(spec.tag, spec.d, spec.k, spec.s);
  auto mismatch = [&](const char* name, double got, double want) {
    if (!same(got, want)) {
      throw ParameterError(std::string(name) + " = " + std::to_string(got) + " disagrees with the derived value " +
                           std::to_string(want) + " for " + std::string(to_string(spec.tag)));
    }
  };
  mismatch("s1", spec.s1, ref.s1);
  mismatch("s2", spec.s2, ref.s2);
  mismatch("r", spec.r, ref.r);
  mismatch("sigma", spec.sigma, ref.sigma);
  if (spec.restriction != ref.restriction) {
    throw ParameterError("restriction " + std::string(multilinear::to_string(spec.restriction)) +
                         " does not match " + std::string(to_string(spec.tag)));
  }
  if (spec.q && (*spec.q < 1 || *spec.q > 2 * spec.k + 1)) {
    throw ParameterError("q must lie in 1..2k+1");
  }
}

double level_norm(std::span<const multilinear::LevelEntry> levels, double p, double s,
                  std::optional<ResonanceLevel> mu) {
  if (!(p >= 1.0)) throw ParameterError("norm exponent must be >= 1");
  const bool sup = std::isinf(p);
  double acc = 0.0;
  for (std::size_t i = 0; i < levels.size();) {
    const FreqVector& n = levels[i].n;
    Amplitude v{};
    std::size_t j = i;
    for (; j < levels.size() && levels[j].n == n; ++j) {
      if (!mu || levels[j].mu == *mu) v += levels[j].value;
    }
    i = j;
    if (sup) {
      acc = std::max(acc, std::pow(japanese_bracket(n), s) * std::abs(v));
    } else {
      acc += weight(n, p, s) * std::pow(std::abs(v), p);
    }
  }
  return sup ? acc : std::pow(acc, 1.0 / p);
}

namespace {

// sup over mu of the weighted norm of n -> levels(n, mu).
double sup_over_levels(std::span<const multilinear::LevelEntry> levels, double p, double s,
                       std::optional<ResonanceLevel> mu) {
  if (mu) return level_norm(levels, p, s, mu);
  const bool sup = std::isinf(p);
  std::map<ResonanceLevel, double> acc;
  for (const auto& e : levels) {
    double& a = acc[e.mu];
    if (sup) {
      a = std::max(a, std::pow(japanese_bracket(e.n), s) * std::abs(e.value));
    } else {
      a += weight(e.n, p, s) * std::pow(std::abs(e.value), p);
    }
  }
  double best = 0.0;
  for (const auto& [m, a] : acc) best = std::max(best, sup ? a : std::pow(a, 1.0 / p));
  return best;
}

EstimateSides dyadic_sides(const EstimateSpec& spec, std::span<const SpectralField> fields) {
  std::vector<std::int64_t> shells;
  for (const auto& f : fields) {
    if (f.empty()) throw DegenerateInputError("dyadic block with an empty field");
    shells.push_back(dyadic_shell(f.begin()->first));
  }
  const auto r = dyadic_block_check(shells, spec.mu.value_or(0), spec.s, fields);
  if (!(r.bound > 0.0)) throw DegenerateInputError("dyadic bound vanishes");
  return {r.lhs, r.bound, 0};
}

}  // namespace

EstimateSides estimate_sides(const EstimateSpec& spec, std::span<const SpectralField> fields,
                             multilinear::EvalMode mode) {
  validate(spec);
  if (spec.tag == EstimateTag::DyadicBlock) {
    if (fields.size() != static_cast<std::size_t>(2 * spec.k + 2)) {
      throw ArityError("DyadicBlock takes 2k+2 fields");
    }
    return dyadic_sides(spec, fields);
  }
  const auto [d, k] = multilinear::check_fields(fields);
  if (k != spec.k) throw ArityError("estimate expects 2k+1 = " + std::to_string(2 * spec.k + 1) + " fields");
  if (d != spec.d) throw DimensionError("field dimension does not match the estimate's d");

  const auto levels = multilinear::resonance_levels(fields, {spec.mu, spec.restriction, std::nullopt, mode});

  EstimateSides out;
  switch (spec.tag) {
    case EstimateTag::B1:
      out.lhs = sup_over_levels(levels, 2.0, spec.s1, spec.mu);
      break;
    case EstimateTag::B1prime:
      out.lhs = level_norm(levels, 2.0, spec.s2, spec.mu);
      break;
    case EstimateTag::R:
      out.lhs = level_norm(levels, 2.0, spec.s, spec.mu);
      break;
    case EstimateTag::B2:
    case EstimateTag::LinfBlock:
      out.lhs = sup_over_levels(levels, spec.r, spec.sigma, spec.mu);
      break;
    case EstimateTag::B2prime:
    case EstimateTag::B3:
      out.lhs = level_norm(levels, spec.r, spec.sigma, spec.mu);
      break;
    case EstimateTag::DyadicBlock:
      break;
  }

  auto product_except = [&](int skip, double s) {
    double prod = 1.0;
    for (int l = 0; l < static_cast<int>(fields.size()); ++l) {
      if (l != skip) prod *= weighted_norm(fields[static_cast<std::size_t>(l)], 2.0, s);
    }
    return prod;
  };
  auto min_over_q = [&](double others_s) {
    const int lo = spec.q ? *spec.q : 1;
    const int hi = spec.q ? *spec.q : 2 * k + 1;
    double best = kInfinity;
    int arg = lo;
    for (int q = lo; q <= hi; ++q) {
      const auto& wq = fields[static_cast<std::size_t>(q - 1)];
      const double v = weighted_norm(wq, spec.r, spec.sigma) * product_except(q - 1, others_s);
      if (v < best) {
        best = v;
        arg = q;
      }
    }
    out.q = arg;
    return best;
  };

  switch (spec.tag) {
    case EstimateTag::B1:
      out.rhs = product_except(-1, spec.s1);
      break;
    case EstimateTag::B1prime:
      out.rhs = product_except(-1, spec.s2);
      break;
    case EstimateTag::R:
    case EstimateTag::B3:
      out.rhs = product_except(-1, spec.s);
      break;
    case EstimateTag::B2:
      out.rhs = min_over_q(spec.s1);
      break;
    case EstimateTag::B2prime:
      out.rhs = min_over_q(spec.s2);
      break;
    case EstimateTag::LinfBlock:
      out.rhs = min_over_q(spec.s);
      break;
    case EstimateTag::DyadicBlock:
      break;
  }
  return out;
}

double estimate_ratio(const EstimateSpec& spec, std::span<const SpectralField> fields,
                      multilinear::EvalMode mode) {
  const auto sides = estimate_sides(spec, fields, mode);
  if (!(sides.rhs > 0.0)) throw DegenerateInputError("right-hand side of the estimate vanishes");
  return sides.lhs / sides.rhs;
}

Counterexample counterexample_family(std::int64_t N) {
  if (N < 1) throw ParameterError("counterexample family needs N >= 1");
  SpectralField w1(2, N), w2(2, N), w3(2, N);
  for (std::int64_t a = -N; a <= N; ++a) {
    w1.set(FreqVector{a, 0}, 1.0);
    w3.set(FreqVector{0, a}, 1.0);
    for (std::int64_t b = -N; b <= N; ++b) w2.set(FreqVector{a, b}, 1.0);
  }
  return {{std::move(w1), std::move(w2), std::move(w3)}, 2, 0, FreqVector::zero(2)};
}

DyadicResult dyadic_block_check(std::span<const std::int64_t> shells, ResonanceLevel mu, double s,
                                std::span<const SpectralField> fields) {
  if (fields.size() < 4 || fields.size() % 2 != 0 || shells.size() != fields.size()) {
    throw ArityError("dyadic blocks take 2k+2 shells and fields with k >= 1");
  }
  const int d = fields.front().dim();
  const int k = static_cast<int>(fields.size() / 2) - 1;
  check_dk(d, k);
  if (!(s > critical_exponent(d, k))) throw ParameterError("dyadic block check requires s > s_c");
  for (std::size_t l = 0; l < fields.size(); ++l) {
    if (!is_power_of_two(shells[l])) throw ParameterError("shell sizes must be powers of two");
    if (fields[l].dim() != d) throw DimensionError("dyadic block fields must share the dimension");
    for (const auto& [n, v] : fields[l]) {
      if (v.imag() != 0.0 || v.real() < 0.0) {
        throw ParameterError("dyadic block fields must be nonnegative real");
      }
      if (dyadic_shell(n) != shells[l]) {
        throw PreconditionError("field " + std::to_string(l) + " has support " + n.to_string() +
                                " outside its shell " + std::to_string(shells[l]));
      }
    }
  }

  const auto levels = multilinear::resonance_levels(fields.subspan(1), {mu, Restriction::None, std::nullopt,
                                                                         multilinear::EvalMode::PairTable});
  DyadicResult r;
  for (const auto& [n0, v0] : fields[0]) {
    auto it = std::lower_bound(levels.begin(), levels.end(), n0,
                               [](const multilinear::LevelEntry& e, const FreqVector& n) { return e.n < n; });
    if (it != levels.end() && it->n == n0) r.lhs += v0.real() * it->value.real();
  }
  const double nmax = static_cast<double>(*std::max_element(shells.begin(), shells.end()));
  r.bound = std::pow(nmax, -2.0 * s);
  for (std::size_t l = 0; l < fields.size(); ++l) {
    r.bound *= std::pow(static_cast<double>(shells[l]), s) * weighted_norm(fields[l], 2.0, 0.0);
  }
  return r;
}

}  // namespace nlslab::estimates
