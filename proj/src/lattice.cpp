#include "nlslab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "nlslab/errors.hpp"

namespace nlslab {

namespace {

void check_coord(std::int64_t v) {
  if (v > FreqVector::kCoordBound || v < -FreqVector::kCoordBound) {
    throw OverflowError("frequency coordinate " + std::to_string(v) + " exceeds 2^24");
  }
}

}  // namespace

FreqVector::FreqVector(std::initializer_list<std::int64_t> coords)
    : FreqVector(std::span<const std::int64_t>(coords.begin(), coords.size())) {}

FreqVector::FreqVector(std::span<const std::int64_t> coords) {
  if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxDim)) {
    throw DimensionError("frequency vectors have dimension 1..4, got " +
                         std::to_string(coords.size()));
  }
  dim_ = static_cast<std::int32_t>(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    check_coord(coords[i]);
    c_[i] = coords[i];
  }
}

FreqVector FreqVector::zero(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw DimensionError("frequency vectors have dimension 1..4, got " + std::to_string(dim));
  }
  FreqVector v;
  v.dim_ = dim;
  return v;
}

std::int64_t FreqVector::max_abs() const noexcept {
  std::int64_t m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(c_[i]));
  return m;
}

std::string FreqVector::to_string() const {
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ",";
    s += std::to_string(c_[i]);
  }
  return s + ")";
}

FreqTuple::FreqTuple(std::vector<FreqVector> entries) : entries_(std::move(entries)) {
  if (entries_.empty() || entries_.size() % 2 == 0) {
    throw ArityError("interaction tuples have odd length 2k+1, got " +
                     std::to_string(entries_.size()));
  }
  const int d = entries_.front().dim();
  for (const auto& e : entries_) {
    if (e.dim() != d) throw DimensionError("mixed dimensions in interaction tuple");
  }
}

FreqVector FreqTuple::signed_sum() const noexcept {
  FreqVector s = FreqVector::zero(dim());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entry_sign(i) > 0) {
      s += entries_[i];
    } else {
      s -= entries_[i];
    }
  }
  return s;
}

ResonanceLevel phi(const FreqVector& n, std::span<const FreqVector> entries) {
  ResonanceLevel mu = n.norm2();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].dim() != n.dim()) throw DimensionError("phi: dimension mismatch");
    mu -= entry_sign(i) * entries[i].norm2();
  }
  return mu;
}

ResonanceLevel phi(const FreqVector& n, const FreqTuple& t) { return phi(n, t.entries()); }

std::strong_ordering order_compare(const FreqVector& a, const FreqVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("order_compare: dimension mismatch");
  const auto na = a.norm2();
  const auto nb = b.norm2();
  if (na != nb) return na <=> nb;
  for (int i = 0; i < a.dim(); ++i) {
    if (a[i] != b[i]) return a[i] <=> b[i];
  }
  return std::strong_ordering::equal;
}

std::string_view to_string(ExceptionalClass c) {
  switch (c) {
    case ExceptionalClass::NotInA:
      return "NotInA";
    case ExceptionalClass::InA1:
      return "InA1";
    case ExceptionalClass::InA2:
      return "InA2";
    case ExceptionalClass::InA3:
      return "InA3";
    case ExceptionalClass::InACubic:
      return "InA_cubic";
  }
  return "?";
}

ExceptionalRegime exceptional_regime(int d, int k) {
  if (d < 1 || k < 1) throw ParameterError("dimension and degree must be positive");
  if (d == 1 && k == 1) {
    throw UnsupportedCase("the exceptional set is not defined for (d,k) = (1,1)");
  }
  if (d * k >= 2 * k + 2) return ExceptionalRegime::Empty;
  if (k == 1) return ExceptionalRegime::Cubic;
  return ExceptionalRegime::Ranked;
}

double japanese_bracket(const FreqVector& n) noexcept {
  return std::sqrt(1.0 + static_cast<double>(n.norm2()));
}

bool bracket_three_halves_le(const FreqVector& a, const FreqVector& b) noexcept {
  using u128 = unsigned __int128;
  const u128 A = 1 + static_cast<u128>(a.norm2());
  const u128 B = 1 + static_cast<u128>(b.norm2());
  // A <= 2^51, so A^2 <= 2^102 < B^3 whenever B > 2^42.
  if (B > (u128{1} << 42)) return true;
  return A * A <= B * B * B;
}

namespace {

// Descending in the ranking order; identical vectors keep ascending index.
template <class Index>
void rank_indices(std::span<const FreqVector> entries, Index* idx, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<Index>(i);
  std::stable_sort(idx, idx + n, [&](Index x, Index y) {
    return order_compare(entries[static_cast<std::size_t>(x)],
                         entries[static_cast<std::size_t>(y)]) > 0;
  });
}

template <class Index>
ExceptionalClass classify_ranked(std::span<const FreqVector> e, const Index* r, int d, int k) {
  auto at = [&](int m) -> const FreqVector& { return e[static_cast<std::size_t>(r[m])]; };
  if (at(0) == at(1)) return ExceptionalClass::InA1;
  if (at(1) == at(2)) return ExceptionalClass::InA2;
  if (k == 2 && d == 2 && at(2) == at(3) && bracket_three_halves_le(at(1), at(2))) {
    return ExceptionalClass::InA3;
  }
  return ExceptionalClass::NotInA;
}

}  // namespace

ExceptionalClass classify_entries(std::span<const FreqVector> entries, ExceptionalRegime regime,
                                  int d, int k) noexcept {
  switch (regime) {
    case ExceptionalRegime::Empty:
      return ExceptionalClass::NotInA;
    case ExceptionalRegime::Cubic:
      return (entries[1] == entries[0] || entries[1] == entries[2]) ? ExceptionalClass::InACubic
                                                                    : ExceptionalClass::NotInA;
    case ExceptionalRegime::Ranked: {
      const std::size_t n = entries.size();
      if (n <= 16) {
        std::array<std::uint8_t, 16> idx{};
        rank_indices(entries, idx.data(), n);
        return classify_ranked(entries, idx.data(), d, k);
      }
      std::vector<std::size_t> idx(n);
      rank_indices(entries, idx.data(), n);
      return classify_ranked(entries, idx.data(), d, k);
    }
  }
  return ExceptionalClass::NotInA;
}

RankProfile rank_and_classify(const FreqTuple& t, int d, int k) {
  const auto regime = exceptional_regime(d, k);
  if (t.size() != static_cast<std::size_t>(2 * k + 1)) {
    throw ArityError("tuple has " + std::to_string(t.size()) + " entries, expected " +
                     std::to_string(2 * k + 1));
  }
  if (t.dim() != d) throw DimensionError("tuple dimension does not match d");

  RankProfile profile;
  profile.order.resize(t.size());
  rank_indices(t.entries(), profile.order.data(), t.size());
  profile.cls = classify_entries(t.entries(), regime, d, k);
  return profile;
}

}  // namespace nlslab
