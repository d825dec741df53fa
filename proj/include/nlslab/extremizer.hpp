#pragma once

#include <cstdint>
#include <tuple>
#include <span>
#include <vector>

#include "nlslab/estimates.hpp"

namespace nlslab::estimates {

struct ExtremizerResult {
  double best_ratio = 0.0;
  double initial_ratio = 0.0;
  std::size_t accepted = 0;
  std::vector<SpectralField> fields;  // the fields attaining best_ratio
};

/// Randomized hill climb over nonnegative fields on the box |n|_inf <= box_radius.
///
/// Starts from seeded random fields (or from `start`, restricted to the box
/// and replaced by moduli), proposes multiplicative single-site
/// perturbations and accepts a proposal iff the ratio strictly increases.
/// The result depends only on (spec, box_radius, iterations, seed, start).
ExtremizerResult extremizer_search(const EstimateSpec& spec, std::int64_t box_radius,
                                   std::size_t iterations, std::uint64_t seed,
                                   std::span<const SpectralField> start = {});

/// Incrementally maintained estimate ratio for nonnegative fields on a box.
///
/// Keeps the level table V(n, mu) densely and updates it in O(S^{2k}) per
/// single-site change, S the number of box points. Supports every tag with
/// a finite LHS exponent except DyadicBlock.
class RatioTracker {
 public:
  RatioTracker(const EstimateSpec& spec, std::int64_t box_radius,
               std::vector<std::vector<double>> values);

  static bool supports(const EstimateSpec& spec);

  double ratio() const;
  double lhs() const;
  double rhs() const;

  /// Sets field l at box point `site` to `value` and updates the sums.
  void update(std::size_t l, std::size_t site, double value);
  /// Undoes every update since the last commit.
  void rollback();
  void commit();

  const std::vector<FreqVector>& points() const noexcept { return points_; }
  double value(std::size_t l, std::size_t site) const { return values_[l][site]; }

 private:
  void rebuild();

  EstimateSpec spec_;
  int d_, k_, width_;
  std::int64_t box_;
  std::vector<FreqVector> points_;
  std::vector<std::int64_t> lin_;     // linear index contribution of each box point
  std::vector<std::int64_t> norm2_;   // |p|^2 of each box point
  std::vector<std::vector<double>> values_;

  // Output frequencies live in the box of radius (2k+1) * box_.
  std::int64_t out_radius_, out_side_;
  std::size_t n_count_;
  std::vector<std::int64_t> out_norm2_;
  std::vector<double> out_weight_;     // <n>^{p s_lhs}
  std::int64_t qmax_, qmin_;
  std::size_t levels_;                 // W = qmax - qmin + 1

  std::vector<double> V_;              // n_idx * W + (qmax - Q)
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 1;
  std::vector<std::pair<std::size_t, double>> saved_;  // (slot, old value)
  std::vector<std::tuple<std::size_t, std::size_t, double>> saved_values_;

  bool per_level_;                     // sup over mu (or a fixed mu)
  double p_, s_lhs_;
  std::vector<double> F_;              // per-mu sums when per_level_, indexed by mu - mu_min_
  std::int64_t mu_min_ = 0;
  std::vector<double> U_;              // per-n totals when !per_level_
  double G_ = 0.0;
  std::vector<double> F_saved_;
  double G_saved_ = 0.0;
  std::vector<std::pair<std::size_t, double>> saved_u_;
  std::vector<std::uint32_t> u_stamp_;

  std::vector<std::vector<double>> field_norm_terms_;  // per field, per weight kind
  std::vector<double> norm_sums_, norm_sums_saved_;
  std::size_t updates_since_rebuild_ = 0;
};

}  // namespace nlslab::estimates
