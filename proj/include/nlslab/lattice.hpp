#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlslab {

/// A point of the frequency lattice Z^d, 1 <= d <= 4.
///
/// Coordinates are bounded by kCoordBound at construction so that every
/// quadratic quantity built from a handful of vectors (|n|^2, the resonance
/// function, dot products) fits in a signed 64-bit integer. Arithmetic
/// operators do not re-check the bound.
class FreqVector {
 public:
  static constexpr int kMaxDim = 4;
  static constexpr std::int64_t kCoordBound = std::int64_t{1} << 24;

  FreqVector() = default;
  FreqVector(std::initializer_list<std::int64_t> coords);
  explicit FreqVector(std::span<const std::int64_t> coords);

  static FreqVector zero(int dim);

  int dim() const noexcept { return dim_; }
  std::int64_t operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }

  // Unchecked coordinate write; used by enumerators that stay inside a
  // validated box.
  void set_unchecked(int i, std::int64_t v) noexcept { c_[static_cast<std::size_t>(i)] = v; }

  std::int64_t norm2() const noexcept {
    std::int64_t s = 0;
    for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
    return s;
  }
  std::int64_t max_abs() const noexcept;
  std::int64_t dot(const FreqVector& o) const noexcept {
    std::int64_t s = 0;
    for (int i = 0; i < dim_; ++i) s += c_[i] * o.c_[i];
    return s;
  }

  FreqVector& operator+=(const FreqVector& o) noexcept {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  FreqVector& operator-=(const FreqVector& o) noexcept {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend FreqVector operator+(FreqVector a, const FreqVector& b) noexcept { return a += b; }
  friend FreqVector operator-(FreqVector a, const FreqVector& b) noexcept { return a -= b; }
  friend FreqVector operator-(FreqVector a) noexcept {
    for (int i = 0; i < a.dim_; ++i) a.c_[i] = -a.c_[i];
    return a;
  }
  FreqVector scaled(std::int64_t f) const noexcept {
    FreqVector r = *this;
    for (int i = 0; i < dim_; ++i) r.c_[i] *= f;
    return r;
  }

  // Plain lexicographic comparison (dimension first). This is the container
  // order, not the norm-first order used for ranking; see order_compare.
  friend bool operator==(const FreqVector&, const FreqVector&) = default;
  friend std::strong_ordering operator<=>(const FreqVector&, const FreqVector&) = default;

  std::string to_string() const;

 private:
  std::int32_t dim_ = 0;
  std::array<std::int64_t, kMaxDim> c_{};
};

struct FreqVectorHash {
  std::size_t operator()(const FreqVector& v) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(v.dim());
    for (int i = 0; i < v.dim(); ++i) {
      h ^= static_cast<std::uint64_t>(v[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Value of the resonance function Phi.
using ResonanceLevel = std::int64_t;

/// Sign carried by entry `index` (0-based) of an interaction tuple:
/// +1 for n_1, n_3, ..., -1 for n_2, n_4, ...
constexpr int entry_sign(std::size_t index) noexcept { return index % 2 == 0 ? 1 : -1; }

/// An ordered (2k+1)-tuple of frequencies with alternating signs.
class FreqTuple {
 public:
  explicit FreqTuple(std::vector<FreqVector> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  int k() const noexcept { return static_cast<int>((entries_.size() - 1) / 2); }
  int dim() const noexcept { return entries_.front().dim(); }
  const FreqVector& operator[](std::size_t i) const noexcept { return entries_[i]; }
  std::span<const FreqVector> entries() const noexcept { return entries_; }

  /// n_1 - n_2 + n_3 - ... + n_{2k+1}.
  FreqVector signed_sum() const noexcept;

 private:
  std::vector<FreqVector> entries_;
};

/// Phi(n; n_1..n_{2k+1}) = |n|^2 - |n_1|^2 + |n_2|^2 - ... - |n_{2k+1}|^2.
ResonanceLevel phi(const FreqVector& n, const FreqTuple& t);
ResonanceLevel phi(const FreqVector& n, std::span<const FreqVector> entries);

/// Norm-then-lexicographic order: a > b iff |a| > |b|, or |a| = |b| and a
/// is lexicographically larger.
std::strong_ordering order_compare(const FreqVector& a, const FreqVector& b);

enum class ExceptionalClass { NotInA, InA1, InA2, InA3, InACubic };

std::string_view to_string(ExceptionalClass c);

/// Which definition of the exceptional set applies for (d, k).
enum class ExceptionalRegime {
  Empty,   // d >= 2 + 2/k
  Cubic,   // k = 1, d in {2, 3}
  Ranked,  // k >= 2, d in {1, 2}
};

/// Throws UnsupportedCase for (d, k) = (1, 1).
ExceptionalRegime exceptional_regime(int d, int k);

struct RankProfile {
  // order[m] is the 0-based original index of the (m+1)-th largest entry.
  std::vector<int> order;
  ExceptionalClass cls = ExceptionalClass::NotInA;
};

RankProfile rank_and_classify(const FreqTuple& t, int d, int k);

/// Allocation-free classification for hot loops. `entries` must hold 2k+1
/// vectors of dimension d; the regime must come from exceptional_regime.
ExceptionalClass classify_entries(std::span<const FreqVector> entries, ExceptionalRegime regime,
                                  int d, int k) noexcept;

inline bool is_exceptional(ExceptionalClass c) noexcept { return c != ExceptionalClass::NotInA; }

/// <n> = (1 + |n|^2)^{1/2}.
double japanese_bracket(const FreqVector& n) noexcept;

/// Exact test of <a> <= <b>^{3/2}, i.e. (1+|a|^2)^2 <= (1+|b|^2)^3.
bool bracket_three_halves_le(const FreqVector& a, const FreqVector& b) noexcept;

}  // namespace nlslab
