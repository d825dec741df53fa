#include "nlslab/extremizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nlslab/errors.hpp"

namespace nlslab::estimates {

namespace {

std::vector<FreqVector> box_points(int d, std::int64_t N) {
  std::vector<FreqVector> out;
  FreqVector p = FreqVector::zero(d);
  for (int i = 0; i < d; ++i) p.set_unchecked(i, -N);
  while (true) {
    out.push_back(p);
    int i = d - 1;
    while (i >= 0 && p[i] == N) {
      p.set_unchecked(i, -N);
      --i;
    }
    if (i < 0) break;
    p.set_unchecked(i, p[i] + 1);
  }
  return out;
}

double powp(double v, double p) { return p == 2.0 ? v * v : std::pow(v, p); }

bool sup_over_mu(EstimateTag t) { return t == EstimateTag::B1 || t == EstimateTag::B2; }

double lhs_exponent(const EstimateSpec& spec) {
  switch (spec.tag) {
    case EstimateTag::B1:
    case EstimateTag::B1prime:
    case EstimateTag::R:
      return 2.0;
    default:
      return spec.r;
  }
}

double lhs_weight(const EstimateSpec& spec) {
  switch (spec.tag) {
    case EstimateTag::B1:
      return spec.s1;
    case EstimateTag::B1prime:
      return spec.s2;
    case EstimateTag::R:
      return spec.s;
    default:
      return spec.sigma;
  }
}

// Weight of the l^2 norms on the right-hand side.
double rhs_weight(const EstimateSpec& spec) {
  switch (spec.tag) {
    case EstimateTag::B1:
    case EstimateTag::B2:
      return spec.s1;
    case EstimateTag::B1prime:
    case EstimateTag::B2prime:
      return spec.s2;
    default:
      return spec.s;
  }
}

bool rhs_min_over_q(EstimateTag t) { return t == EstimateTag::B2 || t == EstimateTag::B2prime; }

}  // namespace

bool RatioTracker::supports(const EstimateSpec& spec) {
  return spec.tag != EstimateTag::DyadicBlock && std::isfinite(lhs_exponent(spec)) &&
         std::isfinite(spec.r);
}

RatioTracker::RatioTracker(const EstimateSpec& spec, std::int64_t box_radius,
                           std::vector<std::vector<double>> values)
    : spec_(spec), d_(spec.d), k_(spec.k), width_(2 * spec.k + 1), box_(box_radius),
      values_(std::move(values)) {
  validate(spec_);
  if (!supports(spec_)) throw ParameterError("the incremental tracker needs a finite LHS exponent");
  if (box_ < 0) throw ParameterError("box radius must be nonnegative");
  if (values_.size() != static_cast<std::size_t>(width_)) throw ArityError("tracker needs 2k+1 fields");

  points_ = box_points(d_, box_);
  for (const auto& v : values_) {
    if (v.size() != points_.size()) throw ParameterError("tracker values must cover the box");
  }

  out_radius_ = static_cast<std::int64_t>(width_) * box_;
  out_side_ = 2 * out_radius_ + 1;
  std::vector<std::int64_t> stride(static_cast<std::size_t>(d_), 1);
  for (int i = d_ - 2; i >= 0; --i) stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i) + 1] * out_side_;
  for (const auto& p : points_) {
    std::int64_t lin = 0;
    for (int i = 0; i < d_; ++i) lin += p[i] * stride[static_cast<std::size_t>(i)];
    lin_.push_back(lin);
    norm2_.push_back(p.norm2());
  }

  n_count_ = 1;
  for (int i = 0; i < d_; ++i) n_count_ *= static_cast<std::size_t>(out_side_);
  p_ = lhs_exponent(spec_);
  s_lhs_ = lhs_weight(spec_);
  out_norm2_.resize(n_count_);
  out_weight_.resize(n_count_);
  for (std::size_t idx = 0; idx < n_count_; ++idx) {
    std::size_t rest = idx;
    std::int64_t n2 = 0;
    for (int i = d_ - 1; i >= 0; --i) {
      const auto c = static_cast<std::int64_t>(rest % static_cast<std::size_t>(out_side_)) - out_radius_;
      rest /= static_cast<std::size_t>(out_side_);
      n2 += c * c;
    }
    out_norm2_[idx] = n2;
    out_weight_[idx] = s_lhs_ == 0.0 ? 1.0 : std::pow(1.0 + static_cast<double>(n2), 0.5 * p_ * s_lhs_);
  }

  const std::int64_t b2 = static_cast<std::int64_t>(d_) * box_ * box_;
  qmax_ = (k_ + 1) * b2;
  qmin_ = -k_ * b2;
  levels_ = static_cast<std::size_t>(qmax_ - qmin_ + 1);
  V_.assign(n_count_ * levels_, 0.0);
  stamp_.assign(V_.size(), 0);

  per_level_ = sup_over_mu(spec_.tag);
  mu_min_ = -qmax_;
  const std::int64_t mu_max = static_cast<std::int64_t>(d_) * out_radius_ * out_radius_ - qmin_;
  if (per_level_) F_.assign(static_cast<std::size_t>(mu_max - mu_min_ + 1), 0.0);
  if (!per_level_) {
    U_.assign(n_count_, 0.0);
    u_stamp_.assign(n_count_, 0);
  }

  // RHS: per field, sum of <p>^{2 s} v^2 and (for min over q) <p>^{r sigma} v^r.
  field_norm_terms_.assign(2, std::vector<double>(points_.size()));
  const double s_rhs = rhs_weight(spec_);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double b = 1.0 + static_cast<double>(norm2_[i]);
    field_norm_terms_[0][i] = std::pow(b, s_rhs);
    field_norm_terms_[1][i] = std::pow(b, 0.5 * spec_.r * spec_.sigma);
  }

  rebuild();
}

void RatioTracker::rebuild() {
  // V from scratch, then the derived sums.
  std::fill(V_.begin(), V_.end(), 0.0);
  const ExceptionalRegime regime =
      spec_.restriction == Restriction::None ? ExceptionalRegime::Empty : exceptional_regime(d_, k_);
  const std::int64_t base = out_radius_ * [&] {
    std::int64_t s = 0, st = 1;
    for (int i = 0; i < d_; ++i, st *= out_side_) s += st;
    return s;
  }();
  const std::size_t S = points_.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(width_), 0);
  std::vector<FreqVector> entries(static_cast<std::size_t>(width_));
  auto rec = [&](auto&& self, int j, std::int64_t lin, std::int64_t Q, double prod) -> void {
    if (j == width_) {
      if (spec_.restriction != Restriction::None) {
        for (int l = 0; l < width_; ++l) entries[static_cast<std::size_t>(l)] = points_[idx[static_cast<std::size_t>(l)]];
        const bool in_a = is_exceptional(classify_entries(entries, regime, d_, k_));
        if (in_a != (spec_.restriction == Restriction::OnA)) return;
      }
      const auto slot = static_cast<std::size_t>(base + lin) * levels_ + static_cast<std::size_t>(qmax_ - Q);
      V_[slot] += prod;
      return;
    }
    const int sg = entry_sign(static_cast<std::size_t>(j));
    const auto& vals = values_[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < S; ++i) {
      if (vals[i] == 0.0) continue;
      idx[static_cast<std::size_t>(j)] = i;
      self(self, j + 1, lin + sg * lin_[i], Q + sg * norm2_[i], prod * vals[i]);
    }
  };
  rec(rec, 0, 0, 0, 1.0);

  if (per_level_) {
    std::fill(F_.begin(), F_.end(), 0.0);
    for (std::size_t n = 0; n < n_count_; ++n) {
      for (std::size_t q = 0; q < levels_; ++q) {
        const double v = V_[n * levels_ + q];
        if (v == 0.0) continue;
        const std::int64_t mu = out_norm2_[n] - (qmax_ - static_cast<std::int64_t>(q));
        F_[static_cast<std::size_t>(mu - mu_min_)] += out_weight_[n] * powp(v, p_);
      }
    }
  } else {
    G_ = 0.0;
    for (std::size_t n = 0; n < n_count_; ++n) {
      double u = 0.0;
      for (std::size_t q = 0; q < levels_; ++q) {
        const std::int64_t mu = out_norm2_[n] - (qmax_ - static_cast<std::int64_t>(q));
        if (!spec_.mu || mu == *spec_.mu) u += V_[n * levels_ + q];
      }
      U_[n] = u;
      G_ += out_weight_[n] * powp(u, p_);
    }
  }

  norm_sums_.assign(2 * static_cast<std::size_t>(width_), 0.0);
  for (int l = 0; l < width_; ++l) {
    for (std::size_t i = 0; i < S; ++i) {
      const double v = values_[static_cast<std::size_t>(l)][i];
      norm_sums_[2 * static_cast<std::size_t>(l)] += field_norm_terms_[0][i] * v * v;
      norm_sums_[2 * static_cast<std::size_t>(l) + 1] += field_norm_terms_[1][i] * powp(v, spec_.r);
    }
  }
  commit();
  updates_since_rebuild_ = 0;
}

double RatioTracker::lhs() const {
  if (per_level_) {
    double best = 0.0;
    if (spec_.mu) {
      const std::int64_t off = *spec_.mu - mu_min_;
      if (off >= 0 && off < static_cast<std::int64_t>(F_.size())) best = F_[static_cast<std::size_t>(off)];
    } else {
      for (const double f : F_) best = std::max(best, f);
    }
    return std::pow(std::max(best, 0.0), 1.0 / p_);
  }
  return std::pow(std::max(G_, 0.0), 1.0 / p_);
}

double RatioTracker::rhs() const {
  auto l2 = [&](int l) { return std::sqrt(std::max(norm_sums_[2 * static_cast<std::size_t>(l)], 0.0)); };
  if (!rhs_min_over_q(spec_.tag)) {
    double prod = 1.0;
    for (int l = 0; l < width_; ++l) prod *= l2(l);
    return prod;
  }
  double best = kInfinity;
  const int lo = spec_.q ? *spec_.q : 1;
  const int hi = spec_.q ? *spec_.q : width_;
  for (int q = lo; q <= hi; ++q) {
    double prod = std::pow(std::max(norm_sums_[2 * static_cast<std::size_t>(q - 1) + 1], 0.0), 1.0 / spec_.r);
    for (int l = 0; l < width_; ++l) {
      if (l != q - 1) prod *= l2(l);
    }
    best = std::min(best, prod);
  }
  return best;
}

double RatioTracker::ratio() const {
  const double r = rhs();
  if (!(r > 0.0)) throw DegenerateInputError("right-hand side of the estimate vanishes");
  return lhs() / r;
}

void RatioTracker::update(std::size_t l, std::size_t site, double value) {
  if (l >= values_.size() || site >= points_.size()) throw ParameterError("tracker update out of range");
  if (!(value >= 0.0) || !std::isfinite(value)) throw ParameterError("tracker values must be nonnegative");
  const double old = values_[l][site];
  saved_values_.emplace_back(l, site, old);
  values_[l][site] = value;
  const double delta = value - old;
  norm_sums_[2 * l] += field_norm_terms_[0][site] * (value * value - old * old);
  norm_sums_[2 * l + 1] += field_norm_terms_[1][site] * (powp(value, spec_.r) - powp(old, spec_.r));
  if (delta == 0.0) return;

  ++epoch_;
  const std::size_t first_saved = saved_.size();
  const ExceptionalRegime regime =
      spec_.restriction == Restriction::None ? ExceptionalRegime::Empty : exceptional_regime(d_, k_);
  std::int64_t base = 0;
  {
    std::int64_t st = 1;
    for (int i = 0; i < d_; ++i, st *= out_side_) base += st;
    base *= out_radius_;
  }
  const std::size_t S = points_.size();
  const int sl = entry_sign(l);
  std::vector<std::size_t> idx(static_cast<std::size_t>(width_), 0);
  idx[l] = site;
  std::vector<FreqVector> entries(static_cast<std::size_t>(width_));

  auto touch = [&](std::size_t slot, double add) {
    if (stamp_[slot] != epoch_) {
      stamp_[slot] = epoch_;
      saved_.emplace_back(slot, V_[slot]);
    }
    V_[slot] += add;
  };

  auto rec = [&](auto&& self, int j, std::int64_t lin, std::int64_t Q, double prod) -> void {
    if (j == width_) {
      if (spec_.restriction != Restriction::None) {
        for (int m = 0; m < width_; ++m) entries[static_cast<std::size_t>(m)] = points_[idx[static_cast<std::size_t>(m)]];
        const bool in_a = is_exceptional(classify_entries(entries, regime, d_, k_));
        if (in_a != (spec_.restriction == Restriction::OnA)) return;
      }
      touch(static_cast<std::size_t>(base + lin) * levels_ + static_cast<std::size_t>(qmax_ - Q), prod);
      return;
    }
    if (static_cast<std::size_t>(j) == l) {
      self(self, j + 1, lin, Q, prod);
      return;
    }
    const int sg = entry_sign(static_cast<std::size_t>(j));
    const auto& vals = values_[static_cast<std::size_t>(j)];
    const bool last = j == width_ - 1 || (j == width_ - 2 && static_cast<std::size_t>(width_ - 1) == l);
    if (last && spec_.restriction == Restriction::None) {
      // Innermost loop without recursion.
      for (std::size_t i = 0; i < S; ++i) {
        if (vals[i] == 0.0) continue;
        const std::int64_t li = lin + sg * lin_[i];
        const std::int64_t qi = Q + sg * norm2_[i];
        touch(static_cast<std::size_t>(base + li) * levels_ + static_cast<std::size_t>(qmax_ - qi), prod * vals[i]);
      }
      return;
    }
    for (std::size_t i = 0; i < S; ++i) {
      if (vals[i] == 0.0) continue;
      idx[static_cast<std::size_t>(j)] = i;
      self(self, j + 1, lin + sg * lin_[i], Q + sg * norm2_[i], prod * vals[i]);
    }
  };
  rec(rec, 0, sl * lin_[site], sl * norm2_[site], delta);

  for (std::size_t i = first_saved; i < saved_.size(); ++i) {
    const auto [slot, before] = saved_[i];
    const double after = V_[slot];
    const std::size_t n = slot / levels_;
    const std::int64_t mu = out_norm2_[n] - (qmax_ - static_cast<std::int64_t>(slot % levels_));
    if (per_level_) {
      F_[static_cast<std::size_t>(mu - mu_min_)] += out_weight_[n] * (powp(after, p_) - powp(before, p_));
    } else if (!spec_.mu || mu == *spec_.mu) {
      if (u_stamp_[n] != epoch_) {
        u_stamp_[n] = epoch_;
        saved_u_.emplace_back(n, U_[n]);
      }
      const double u_old = U_[n];
      U_[n] += after - before;
      G_ += out_weight_[n] * (powp(U_[n], p_) - powp(u_old, p_));
    }
  }
}

void RatioTracker::rollback() {
  for (auto it = saved_.rbegin(); it != saved_.rend(); ++it) V_[it->first] = it->second;
  for (auto it = saved_u_.rbegin(); it != saved_u_.rend(); ++it) U_[it->first] = it->second;
  for (auto it = saved_values_.rbegin(); it != saved_values_.rend(); ++it) {
    values_[std::get<0>(*it)][std::get<1>(*it)] = std::get<2>(*it);
  }
  F_ = F_saved_;
  G_ = G_saved_;
  norm_sums_ = norm_sums_saved_;
  saved_.clear();
  saved_u_.clear();
  saved_values_.clear();
}

void RatioTracker::commit() {
  saved_.clear();
  saved_u_.clear();
  saved_values_.clear();
  F_saved_ = F_;
  G_saved_ = G_;
  norm_sums_saved_ = norm_sums_;
  // Refresh the derived sums now and then to bound drift from the
  // incremental differences.
  if (++updates_since_rebuild_ >= 512) {
    updates_since_rebuild_ = 0;
    if (per_level_) {
      std::fill(F_.begin(), F_.end(), 0.0);
      for (std::size_t n = 0; n < n_count_; ++n) {
        for (std::size_t q = 0; q < levels_; ++q) {
          const double v = V_[n * levels_ + q];
          if (v == 0.0) continue;
          const std::int64_t mu = out_norm2_[n] - (qmax_ - static_cast<std::int64_t>(q));
          F_[static_cast<std::size_t>(mu - mu_min_)] += out_weight_[n] * powp(v, p_);
        }
      }
      F_saved_ = F_;
    } else {
      G_ = 0.0;
      for (std::size_t n = 0; n < n_count_; ++n) G_ += out_weight_[n] * powp(U_[n], p_);
      G_saved_ = G_;
    }
  }
}

namespace {

std::vector<SpectralField> to_fields(int d, std::int64_t N, const std::vector<FreqVector>& points,
                                     const std::vector<std::vector<double>>& values) {
  std::vector<SpectralField> out;
  for (const auto& v : values) {
    SpectralField f(d, N);
    for (std::size_t i = 0; i < points.size(); ++i) f.set(points[i], v[i]);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

ExtremizerResult extremizer_search(const EstimateSpec& spec, std::int64_t box_radius,
                                   std::size_t iterations, std::uint64_t seed,
                                   std::span<const SpectralField> start) {
  validate(spec);
  if (spec.tag == EstimateTag::DyadicBlock) {
    throw ParameterError("extremizer search does not cover DyadicBlock");
  }
  if (box_radius < 0) throw ParameterError("box radius must be nonnegative");
  const int width = 2 * spec.k + 1;
  const auto points = box_points(spec.d, box_radius);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick_field(0, width - 1);
  std::uniform_int_distribution<std::size_t> pick_site(0, points.size() - 1);

  std::vector<std::vector<double>> values(static_cast<std::size_t>(width), std::vector<double>(points.size()));
  if (!start.empty()) {
    if (start.size() != static_cast<std::size_t>(width)) throw ArityError("start needs 2k+1 fields");
    for (int l = 0; l < width; ++l) {
      if (start[static_cast<std::size_t>(l)].dim() != spec.d) throw DimensionError("start field dimension");
      for (std::size_t i = 0; i < points.size(); ++i) {
        values[static_cast<std::size_t>(l)][i] = std::abs(start[static_cast<std::size_t>(l)].at(points[i]));
      }
    }
  } else {
    for (auto& v : values) {
      for (auto& x : v) x = 1.0 - unit(rng);
    }
  }

  ExtremizerResult result;
  if (RatioTracker::supports(spec)) {
    RatioTracker tracker(spec, box_radius, values);
    double best = tracker.ratio();
    result.initial_ratio = best;
    for (std::size_t it = 0; it < iterations; ++it) {
      const auto l = static_cast<std::size_t>(pick_field(rng));
      const std::size_t site = pick_site(rng);
      const double factor = std::exp(0.5 * gauss(rng));
      const double cur = tracker.value(l, site);
      if (cur == 0.0) continue;
      tracker.update(l, site, cur * factor);
      const double r = tracker.ratio();
      if (r > best) {
        best = r;
        tracker.commit();
        values[l][site] = cur * factor;
        ++result.accepted;
      } else {
        tracker.rollback();
      }
    }
    result.best_ratio = best;
  } else {
    auto fields = to_fields(spec.d, box_radius, points, values);
    double best = estimate_ratio(spec, fields);
    result.initial_ratio = best;
    for (std::size_t it = 0; it < iterations; ++it) {
      const auto l = static_cast<std::size_t>(pick_field(rng));
      const std::size_t site = pick_site(rng);
      const double factor = std::exp(0.5 * gauss(rng));
      const double cur = values[l][site];
      if (cur == 0.0) continue;
      fields[l].set(points[site], cur * factor);
      const double r = estimate_ratio(spec, fields);
      if (r > best) {
        best = r;
        values[l][site] = cur * factor;
        ++result.accepted;
      } else {
        fields[l].set(points[site], cur);
      }
    }
    result.best_ratio = best;
  }
  result.fields = to_fields(spec.d, box_radius, points, values);
  return result;
}

}  // namespace nlslab::estimates
