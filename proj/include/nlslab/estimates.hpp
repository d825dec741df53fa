#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nlslab/multilinear.hpp"

namespace nlslab::estimates {

using multilinear::Restriction;

/// Critical exponent s_c = d/2 - 1/k.
double critical_exponent(int d, int k);
/// Embedding exponent s_e = d(2k-1) / (2(2k+1)).
double embedding_exponent(int d, int k);
/// eps(k) = 1/2 min{1/(k(2k+1)), 3/5 - 9/16, (2k+3)/(4k(2k+1)), 3/10 - 1/6}.
double epsilon_k(int k);

enum class ParamRegime {
  HighDim,   // (i)   d >= 2 + 2/k
  LowDim,    // (ii)  d in {1, 2}, k >= 2
  Cubic,     // (iii) d in {2, 3}, k = 1
};

ParamRegime param_regime(int d, int k);

struct RegimeParams {
  double s1 = 0.0;
  double r = 2.0;
  double sigma = 0.0;
};

/// The [s1, r, sigma] row for (d, k, s).
RegimeParams regime_parameters(int d, int k, double s);

enum class EstimateTag { B1, B1prime, R, B2, B2prime, B3, DyadicBlock, LinfBlock };

std::string_view to_string(EstimateTag t);
std::optional<EstimateTag> estimate_tag_from_string(std::string_view name);

/// A multilinear estimate, LHS / RHS:
///
///   B1         sup_mu |Phi=mu sum|_{l2_{s1}}          prod |w_l|_{l2_{s1}}
///   B1prime    |full sum|_{l2_{s2}}                    prod |w_l|_{l2_{s2}}
///   R          |A sum|_{l2_s}                          prod |w_l|_{l2_s}
///   B2         sup_mu |A^c, Phi=mu sum|_{l^r_sigma}    min_q |w_q|_{l^r_sigma} prod_{l!=q} |w_l|_{l2_{s1}}
///   B2prime    |A^c sum|_{l^r_sigma}                   min_q |w_q|_{l^r_sigma} prod_{l!=q} |w_l|_{l2_{s2}}
///   B3         |A^c sum|_{l^r_sigma}                   prod |w_l|_{l2_s}
///   LinfBlock  sup_mu |A^c, Phi=mu sum|_{l^inf}        |w_q|_{l^inf} prod_{l!=q} |w_l|_{l2_s}
///   DyadicBlock  (2k+2)-linear shell sum, see dyadic_block_check
///
/// q is 1-based. When q is unset the minimum over q is taken; when mu is set
/// it replaces the supremum over mu.
struct EstimateSpec {
  EstimateTag tag = EstimateTag::B1;
  int d = 2;
  int k = 1;
  double s = 1.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double r = 2.0;
  double sigma = 0.0;
  std::optional<int> q;
  std::optional<ResonanceLevel> mu;
  Restriction restriction = Restriction::None;

  /// Fills s1, s2, r, sigma and the restriction from (tag, d, k, s).
  static EstimateSpec derive(EstimateTag tag, int d, int k, double s);
};

/// Throws ParameterError when s1, s2, r, sigma or the restriction disagree
/// with the values derived from (tag, d, k, s), or q is out of range.
void validate(const EstimateSpec& spec);

/// Weighted norm of the parts of a level table selected by mu (all if unset).
double level_norm(std::span<const multilinear::LevelEntry> levels, double p, double s,
                  std::optional<ResonanceLevel> mu = std::nullopt);

/// Left- and right-hand sides of the estimate for the given fields.
struct EstimateSides {
  double lhs = 0.0;
  double rhs = 0.0;
  int q = 0;  // 1-based index attaining the RHS minimum (0 if unused)
};

EstimateSides estimate_sides(const EstimateSpec& spec, std::span<const SpectralField> fields,
                             multilinear::EvalMode mode = multilinear::EvalMode::PairTable);

/// LHS / RHS. Throws DegenerateInputError when the RHS vanishes.
double estimate_ratio(const EstimateSpec& spec, std::span<const SpectralField> fields,
                      multilinear::EvalMode mode = multilinear::EvalMode::PairTable);

/// d = 2, k = 1 indicator fields on the horizontal segment, the square and
/// the vertical segment of radius N; evaluated with q = 2, mu = 0 at n = 0.
struct Counterexample {
  std::array<SpectralField, 3> fields;
  int q = 2;
  ResonanceLevel mu = 0;
  FreqVector n;
};

Counterexample counterexample_family(std::int64_t N);

struct DyadicResult {
  double lhs = 0.0;
  double bound = 0.0;
};

/// Sum of prod_l w_l(n_l) over n_0 - n_1 + ... - n_{2k+1} = 0 and
/// |n_0|^2 - |n_1|^2 + ... - |n_{2k+1}|^2 = mu, together with
/// N_max^{-2s} prod N_l^s |w_l|_{l2}. Fields must be nonnegative real and
/// supported in their shells N_l <= <n> < 2N_l.
DyadicResult dyadic_block_check(std::span<const std::int64_t> shells, ResonanceLevel mu, double s,
                                std::span<const SpectralField> fields);

}  // namespace nlslab::estimates
