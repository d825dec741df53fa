// Serial tuple-by-tuple evaluation of the constrained multilinear sum. Kept
// as the oracle for the PairTable kernel and as the benchmark baseline.

#include <map>
#include <utility>

#include "nlslab/multilinear.hpp"

namespace nlslab::multilinear::reference {

std::vector<LevelEntry> naive_levels(std::span<const SpectralField> fields, const LevelQuery& query) {
  const auto [d, k] = check_fields(fields);
  const std::size_t width = fields.size();
  ExceptionalRegime regime = ExceptionalRegime::Empty;
  if (query.restriction != Restriction::None) regime = exceptional_regime(d, k);

  std::vector<std::vector<std::pair<FreqVector, Amplitude>>> support;
  for (const auto& f : fields) support.emplace_back(f.begin(), f.end());

  std::map<std::pair<FreqVector, ResonanceLevel>, std::pair<Amplitude, std::uint64_t>> cells;
  std::vector<FreqVector> entries(width);
  std::vector<Amplitude> values(width);

  auto visit = [&] {
    FreqVector n = FreqVector::zero(d);
    for (std::size_t l = 0; l < width; ++l) {
      if (entry_sign(l) > 0) {
        n += entries[l];
      } else {
        n -= entries[l];
      }
    }
    if (query.n_target && n != *query.n_target) return;
    const ResonanceLevel mu = phi(n, entries);
    if (query.mu && mu != *query.mu) return;
    if (query.restriction != Restriction::None) {
      const bool in_a = is_exceptional(classify_entries(entries, regime, d, k));
      if (in_a != (query.restriction == Restriction::OnA)) return;
    }
    Amplitude prod{1.0};
    for (const auto& v : values) prod *= v;
    auto& cell = cells[{n, mu}];
    cell.first += prod;
    ++cell.second;
  };

  auto rec = [&](auto&& self, std::size_t l) -> void {
    if (l == width) {
      visit();
      return;
    }
    for (const auto& [p, v] : support[l]) {
      entries[l] = p;
      values[l] = v;
      self(self, l + 1);
    }
  };
  rec(rec, 0);

  std::vector<LevelEntry> out;
  out.reserve(cells.size());
  for (const auto& [key, cell] : cells) out.push_back({key.first, key.second, cell.first, cell.second});
  return out;
}

}  // namespace nlslab::multilinear::reference
