// Serial right-hand side of the Galerkin system evaluated tuple by tuple.
// Oracle for the grouped InteractionTable kernel.

#include <cmath>

#include "nlslab/errors.hpp"
#include "nlslab/spectral_flow.hpp"

namespace nlslab::flow::reference {

SpectralField naive_rhs(const SpectralField& omega, double t, const FlowParams& params) {
  validate(params);
  const int d = params.d;
  const std::size_t width = static_cast<std::size_t>(2 * params.k + 1);
  const std::int64_t N = params.box_radius;
  for (const auto& [n, v] : omega) {
    if (n.max_abs() > N) throw PreconditionError("mode outside the Galerkin box");
  }
  const bool classify = !(d == 1 && params.k == 1);
  const ExceptionalRegime regime = classify ? exceptional_regime(d, params.k) : ExceptionalRegime::Empty;

  std::vector<FreqVector> box;
  {
    FreqVector p = FreqVector::zero(d);
    const std::int64_t side = 2 * N + 1;
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) total *= side;
    for (std::int64_t c = 0; c < total; ++c) {
      std::int64_t rest = c;
      for (int i = d - 1; i >= 0; --i) {
        p.set_unchecked(i, rest % side - N);
        rest /= side;
      }
      box.push_back(p);
    }
  }

  SpectralField out(d, N);
  for (const auto& n : box) out.set(n, 0.0);
  std::vector<FreqVector> entries(width);
  auto rec = [&](auto&& self, std::size_t l) -> void {
    if (l == width) {
      FreqVector n = FreqVector::zero(d);
      Amplitude prod{1.0};
      for (std::size_t j = 0; j < width; ++j) {
        const Amplitude v = omega.at(entries[j]);
        if (entry_sign(j) > 0) {
          n += entries[j];
          prod *= v;
        } else {
          n -= entries[j];
          prod *= std::conj(v);
        }
      }
      if (n.max_abs() > N) return;
      if (params.splitting != Splitting::Full) {
        const bool in_a = classify && is_exceptional(classify_entries(entries, regime, d, params.k));
        if (in_a != (params.splitting == Splitting::RemainderR)) return;
      }
      const double phase = t * static_cast<double>(phi(n, entries));
      out.add(n, params.c_const * params.lambda * std::polar(1.0, phase) * prod);
      return;
    }
    for (const auto& p : box) {
      entries[l] = p;
      self(self, l + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace nlslab::flow::reference
