#include "nlslab/multilinear.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nlslab/errors.hpp"
#include "nlslab/parallel.hpp"

namespace nlslab::multilinear {

std::string_view to_string(Restriction r) {
  switch (r) {
    case Restriction::None:
      return "None";
    case Restriction::OnA:
      return "OnA";
    case Restriction::OnAc:
      return "OnAc";
  }
  return "?";
}

std::pair<int, int> check_fields(std::span<const SpectralField> fields) {
  if (fields.size() % 2 == 0) {
    throw ArityError("multilinear sums take an odd number of fields, got " +
                     std::to_string(fields.size()));
  }
  const int d = fields.front().dim();
  for (const auto& f : fields) {
    if (f.dim() != d) throw DimensionError("fields of a multilinear sum must share the dimension");
  }
  return {d, static_cast<int>((fields.size() - 1) / 2)};
}

PairTable::PairTable(std::span<const SpectralField> fields, std::size_t first_index) {
  for (const auto& f : fields) {
    support_.emplace_back(f.begin(), f.end());
  }
  const std::size_t w = support_.size();
  const int d = fields.empty() ? 1 : fields.front().dim();

  struct Record {
    FreqVector sum;
    std::int64_t quad;
    std::uint32_t id;
  };
  std::vector<Record> records;
  std::vector<std::uint32_t> raw_tuples;
  std::vector<Amplitude> raw_values;
  std::vector<std::uint32_t> idx(w, 0);

  auto rec = [&](auto&& self, std::size_t j, FreqVector sum, std::int64_t quad, Amplitude value) -> void {
    if (j == w) {
      records.push_back({sum, quad, static_cast<std::uint32_t>(raw_values.size())});
      raw_tuples.insert(raw_tuples.end(), idx.begin(), idx.end());
      raw_values.push_back(value);
      return;
    }
    const int sg = entry_sign(first_index + j);
    const auto& sup = support_[j];
    for (std::uint32_t i = 0; i < sup.size(); ++i) {
      idx[j] = i;
      const auto& [p, v] = sup[i];
      self(self, j + 1, sg > 0 ? sum + p : sum - p, quad + sg * p.norm2(), value * v);
    }
  };
  rec(rec, 0, FreqVector::zero(d), 0, Amplitude{1.0});

  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    if (a.sum != b.sum) return a.sum < b.sum;
    if (a.quad != b.quad) return a.quad < b.quad;
    return a.id < b.id;
  });

  tuples_.resize(raw_tuples.size());
  tuple_values_.resize(raw_values.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto id = records[r].id;
    std::copy_n(raw_tuples.begin() + static_cast<std::ptrdiff_t>(id * w), w,
                tuples_.begin() + static_cast<std::ptrdiff_t>(r * w));
    tuple_values_[r] = raw_values[id];
    if (groups_.empty() || groups_.back().sum != records[r].sum ||
        groups_.back().quad != records[r].quad) {
      groups_.push_back({records[r].sum, records[r].quad, Amplitude{}, 0, static_cast<std::uint32_t>(r)});
    }
    groups_.back().value += raw_values[id];
    ++groups_.back().multiplicity;
  }

  for (std::uint32_t g = 0; g < groups_.size();) {
    std::uint32_t e = g;
    while (e < groups_.size() && groups_[e].sum == groups_[g].sum) ++e;
    buckets_.emplace(groups_[g].sum, std::make_pair(g, e));
    sums_.push_back(groups_[g].sum);
    g = e;
  }
}

std::span<const PairTable::Group> PairTable::bucket(const FreqVector& sum) const {
  auto it = buckets_.find(sum);
  if (it == buckets_.end()) return {};
  return std::span<const Group>(groups_).subspan(it->second.first, it->second.second - it->second.first);
}

namespace {

struct Cell {
  ResonanceLevel mu;
  Amplitude value;
  std::uint64_t count;
};

// Sums cells with equal mu; the result is ordered by mu and the summation
// order within a level is the push order.
void merge_cells(const FreqVector& n, std::vector<Cell>& cells, std::vector<LevelEntry>& out) {
  std::stable_sort(cells.begin(), cells.end(),
                   [](const Cell& a, const Cell& b) { return a.mu < b.mu; });
  for (std::size_t i = 0; i < cells.size();) {
    LevelEntry e{n, cells[i].mu, Amplitude{}, 0};
    std::size_t j = i;
    for (; j < cells.size() && cells[j].mu == cells[i].mu; ++j) {
      e.value += cells[j].value;
      e.count += cells[j].count;
    }
    if (e.count > 0) out.push_back(e);
    i = j;
  }
  cells.clear();
}

class Classifier {
 public:
  Classifier(Restriction r, int d, int k) : r_(r), d_(d), k_(k) {
    if (r != Restriction::None) regime_ = exceptional_regime(d, k);
  }

  bool keeps(std::span<const FreqVector> entries) const noexcept {
    if (r_ == Restriction::None) return true;
    const bool in_a = is_exceptional(classify_entries(entries, regime_, d_, k_));
    return r_ == Restriction::OnA ? in_a : !in_a;
  }

  bool trivial() const noexcept { return r_ == Restriction::None; }

 private:
  Restriction r_;
  int d_, k_;
  ExceptionalRegime regime_ = ExceptionalRegime::Empty;
};

std::vector<FreqVector> candidate_outputs(const PairTable& a, const PairTable& b) {
  std::vector<FreqVector> out;
  out.reserve(a.sums().size() * b.sums().size());
  for (const auto& sa : a.sums()) {
    for (const auto& sb : b.sums()) out.push_back(sa + sb);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<LevelEntry> resonance_levels(std::span<const SpectralField> fields, const LevelQuery& query) {
  const auto [d, k] = check_fields(fields);
  if (query.n_target && query.n_target->dim() != d) {
    throw DimensionError("target frequency has the wrong dimension");
  }
  if (query.mode == EvalMode::Naive) return reference::naive_levels(fields, query);

  const Classifier classifier(query.restriction, d, k);
  const auto kk = static_cast<std::size_t>(k);
  const PairTable left(fields.subspan(0, kk), 0);
  const PairTable right(fields.subspan(kk), kk);

  std::vector<FreqVector> outputs;
  if (query.n_target) {
    outputs.push_back(*query.n_target);
  } else {
    outputs = candidate_outputs(left, right);
  }

  const std::size_t nchunks = parallel::chunk_count(outputs.size(), 16);
  std::vector<std::vector<LevelEntry>> partial(nchunks);
  parallel::for_each_chunk(
      outputs.size(),
      [&](std::size_t c, std::size_t begin, std::size_t end) {
        std::vector<Cell> cells;
        std::vector<FreqVector> entries(2 * kk + 1);
        auto& out = partial[c];
        for (std::size_t i = begin; i < end; ++i) {
          const FreqVector& n = outputs[i];
          const std::int64_t n2 = n.norm2();
          for (const auto& sa : left.sums()) {
            const auto bgroups = right.bucket(n - sa);
            if (bgroups.empty()) continue;
            for (const auto& ga : left.bucket(sa)) {
              auto bbegin = bgroups.begin(), bend = bgroups.end();
              if (query.mu) {
                const std::int64_t want = n2 - ga.quad - *query.mu;
                auto lo = std::lower_bound(bbegin, bend, want, [](const PairTable::Group& g, std::int64_t q) {
                  return g.quad < q;
                });
                bbegin = lo;
                bend = (lo != bgroups.end() && lo->quad == want) ? lo + 1 : lo;
              }
              for (auto gb = bbegin; gb != bend; ++gb) {
                const ResonanceLevel mu = n2 - ga.quad - gb->quad;
                if (classifier.trivial()) {
                  cells.push_back({mu, ga.value * gb->value, ga.multiplicity * gb->multiplicity});
                  continue;
                }
                Cell cell{mu, Amplitude{}, 0};
                for (std::uint64_t ta = ga.first; ta < ga.first + ga.multiplicity; ++ta) {
                  const auto ia = left.tuple(ta);
                  for (std::size_t j = 0; j < kk; ++j) entries[j] = left.point(j, ia[j]);
                  for (std::uint64_t tb = gb->first; tb < gb->first + gb->multiplicity; ++tb) {
                    const auto ib = right.tuple(tb);
                    for (std::size_t j = 0; j <= kk; ++j) entries[kk + j] = right.point(j, ib[j]);
                    if (!classifier.keeps(entries)) continue;
                    cell.value += left.tuple_value(ta) * right.tuple_value(tb);
                    ++cell.count;
                  }
                }
                if (cell.count > 0) cells.push_back(cell);
              }
            }
          }
          merge_cells(n, cells, out);
        }
      },
      16);

  std::vector<LevelEntry> result;
  for (auto& p : partial) result.insert(result.end(), p.begin(), p.end());
  return result;
}

namespace {

std::int64_t output_box(std::span<const SpectralField> fields) {
  std::int64_t b = 0;
  for (const auto& f : fields) b += f.box_radius();
  return std::min(b, FreqVector::kCoordBound);
}

}  // namespace

SpectralField signed_convolution(std::span<const SpectralField> fields, EvalMode mode) {
  return resonant_sum(fields, std::nullopt, Restriction::None, std::nullopt, mode);
}

SpectralField resonant_sum(std::span<const SpectralField> fields, std::optional<ResonanceLevel> mu,
                           Restriction restriction, std::optional<FreqVector> n_target,
                           EvalMode mode) {
  const auto [d, k] = check_fields(fields);
  (void)k;
  const auto levels = resonance_levels(fields, {mu, restriction, n_target, mode});
  SpectralField out(d, output_box(fields));
  for (const auto& e : levels) {
    if (out.in_box(e.n)) out.add(e.n, e.value);
  }
  return out;
}

}  // namespace nlslab::multilinear
