#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "nlslab/lattice.hpp"

namespace nlslab {

using Amplitude = std::complex<double>;

/// A finitely supported sequence Z^d -> C, with a declared truncation box
/// {|n|_inf <= box_radius} that contains every stored key.
///
/// Stored keys form the support; an explicitly stored zero still counts.
class SpectralField {
 public:
  using Storage = std::map<FreqVector, Amplitude>;
  using const_iterator = Storage::const_iterator;

  SpectralField(int dim, std::int64_t box_radius);

  int dim() const noexcept { return dim_; }
  std::int64_t box_radius() const noexcept { return box_radius_; }

  void set(const FreqVector& n, Amplitude value);
  void add(const FreqVector& n, Amplitude value);
  void erase(const FreqVector& n) { data_.erase(n); }

  Amplitude at(const FreqVector& n) const;
  bool contains(const FreqVector& n) const { return data_.count(n) != 0; }
  bool in_box(const FreqVector& n) const noexcept;

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  const_iterator begin() const noexcept { return data_.begin(); }
  const_iterator end() const noexcept { return data_.end(); }

  std::vector<FreqVector> support() const;
  SpectralField scaled(Amplitude c) const;
  SpectralField conjugated() const;
  SpectralField reflected() const;  // n -> -n
  SpectralField with_box(std::int64_t box_radius) const;  // keys outside are dropped

  friend bool operator==(const SpectralField&, const SpectralField&) = default;

 private:
  int dim_;
  std::int64_t box_radius_;
  Storage data_;
};

/// Unit mass at `n`.
SpectralField delta(const FreqVector& n, Amplitude value = 1.0, std::int64_t box_radius = -1);

/// Indicator of the box {|n|_inf <= radius}.
SpectralField box_indicator(int dim, std::int64_t radius);

/// Largest value of |f(n) - g(n)| over the union of supports.
double max_abs_difference(const SpectralField& f, const SpectralField& g);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ||f||_{l^p_s} = (sum <n>^{ps} |f(n)|^p)^{1/p}, or sup <n>^s |f(n)| for p = inf.
double weighted_norm(const SpectralField& f, double p, double s);

/// Restriction of f to the dyadic shell N <= <n> < 2N.
SpectralField dyadic_project(const SpectralField& f, std::int64_t N);

/// The dyadic N with N <= <n> < 2N.
std::int64_t dyadic_shell(const FreqVector& n) noexcept;

bool is_power_of_two(std::int64_t N) noexcept;

}  // namespace nlslab
