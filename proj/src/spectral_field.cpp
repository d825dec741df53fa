#include "nlslab/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlslab/errors.hpp"

namespace nlslab {

SpectralField::SpectralField(int dim, std::int64_t box_radius)
    : dim_(dim), box_radius_(box_radius) {
  if (dim < 1 || dim > FreqVector::kMaxDim) {
    throw DimensionError("spectral field dimension must be 1..4");
  }
  if (box_radius < 0 || box_radius > FreqVector::kCoordBound) {
    throw ParameterError("box radius must lie in [0, 2^24]");
  }
}

bool SpectralField::in_box(const FreqVector& n) const noexcept {
  return n.dim() == dim_ && n.max_abs() <= box_radius_;
}

void SpectralField::set(const FreqVector& n, Amplitude value) {
  if (n.dim() != dim_) throw DimensionError("field key has wrong dimension");
  if (!in_box(n)) {
    throw PreconditionError("key " + n.to_string() + " outside box of radius " +
                            std::to_string(box_radius_));
  }
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw ParameterError("field amplitudes must be finite");
  }
  data_[n] = value;
}

void SpectralField::add(const FreqVector& n, Amplitude value) {
  auto it = data_.find(n);
  if (it == data_.end()) {
    set(n, value);
  } else {
    it->second += value;
  }
}

Amplitude SpectralField::at(const FreqVector& n) const {
  auto it = data_.find(n);
  return it == data_.end() ? Amplitude{} : it->second;
}

std::vector<FreqVector> SpectralField::support() const {
  std::vector<FreqVector> out;
  out.reserve(data_.size());
  for (const auto& [n, v] : data_) out.push_back(n);
  return out;
}

SpectralField SpectralField::scaled(Amplitude c) const {
  SpectralField r = *this;
  for (auto& [n, v] : r.data_) v *= c;
  return r;
}

SpectralField SpectralField::conjugated() const {
  SpectralField r = *this;
  for (auto& [n, v] : r.data_) v = std::conj(v);
  return r;
}

SpectralField SpectralField::reflected() const {
  SpectralField r(dim_, box_radius_);
  for (const auto& [n, v] : data_) r.data_.emplace(-n, v);
  return r;
}

SpectralField SpectralField::with_box(std::int64_t box_radius) const {
  SpectralField r(dim_, box_radius);
  for (const auto& [n, v] : data_) {
    if (n.max_abs() <= box_radius) r.data_.emplace(n, v);
  }
  return r;
}

SpectralField delta(const FreqVector& n, Amplitude value, std::int64_t box_radius) {
  SpectralField f(n.dim(), box_radius < 0 ? n.max_abs() : box_radius);
  f.set(n, value);
  return f;
}

SpectralField box_indicator(int dim, std::int64_t radius) {
  SpectralField f(dim, radius);
  FreqVector n = FreqVector::zero(dim);
  for (int i = 0; i < dim; ++i) n.set_unchecked(i, -radius);
  while (true) {
    f.set(n, 1.0);
    int i = dim - 1;
    while (i >= 0 && n[i] == radius) {
      n.set_unchecked(i, -radius);
      --i;
    }
    if (i < 0) break;
    n.set_unchecked(i, n[i] + 1);
  }
  return f;
}

double max_abs_difference(const SpectralField& f, const SpectralField& g) {
  double m = 0.0;
  for (const auto& [n, v] : f) m = std::max(m, std::abs(v - g.at(n)));
  for (const auto& [n, v] : g) {
    if (!f.contains(n)) m = std::max(m, std::abs(v));
  }
  return m;
}

double weighted_norm(const SpectralField& f, double p, double s) {
  if (!(p >= 1.0)) throw ParameterError("weighted_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& [n, v] : f) m = std::max(m, std::pow(japanese_bracket(n), s) * std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (const auto& [n, v] : f) {
    const double w = std::pow(1.0 + static_cast<double>(n.norm2()), 0.5 * p * s);
    acc += w * std::pow(std::abs(v), p);
  }
  return std::pow(acc, 1.0 / p);
}

bool is_power_of_two(std::int64_t N) noexcept { return N >= 1 && (N & (N - 1)) == 0; }

std::int64_t dyadic_shell(const FreqVector& n) noexcept {
  // Largest power of two N with N^2 <= 1 + |n|^2.
  const std::int64_t b = 1 + n.norm2();
  std::int64_t N = 1;
  while ((2 * N) * (2 * N) <= b) N *= 2;
  return N;
}

SpectralField dyadic_project(const SpectralField& f, std::int64_t N) {
  if (!is_power_of_two(N)) throw ParameterError("dyadic_project: N must be a power of two");
  SpectralField r(f.dim(), f.box_radius());
  for (const auto& [n, v] : f) {
    if (dyadic_shell(n) == N) r.set(n, v);
  }
  return r;
}

}  // namespace nlslab
