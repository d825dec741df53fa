#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "nlslab/lattice.hpp"
#include "nlslab/spectral_field.hpp"

namespace nlslab::multilinear {

enum class Restriction { None, OnA, OnAc };
enum class EvalMode { PairTable, Naive };

std::string_view to_string(Restriction r);

/// One half of a (2k+1)-fold sum, tabulated by (signed vector sum, signed
/// quadratic sum). Entry j of the half is global entry first_index + j and
/// carries sign entry_sign(first_index + j).
///
/// For a full tuple split as A (entries [0, k)) and B (entries [k, 2k+1)),
/// n = sum_A + sum_B and Phi = |n|^2 - quad_A - quad_B.
class PairTable {
 public:
  struct Group {
    FreqVector sum;
    std::int64_t quad = 0;
    Amplitude value;                 // sum of the member products
    std::uint64_t multiplicity = 0;  // number of member tuples
    std::uint32_t first = 0;         // member tuples [first, first + multiplicity)
  };

  PairTable(std::span<const SpectralField> fields, std::size_t first_index);

  std::size_t width() const noexcept { return support_.size(); }
  std::span<const Group> groups() const noexcept { return groups_; }

  /// Groups whose vector sum equals `sum`, ordered by quad.
  std::span<const Group> bucket(const FreqVector& sum) const;

  /// Distinct vector sums in increasing order.
  const std::vector<FreqVector>& sums() const noexcept { return sums_; }

  /// Support indices of member tuple t (one per slot) and its product.
  std::span<const std::uint32_t> tuple(std::size_t t) const {
    return {tuples_.data() + t * width(), width()};
  }
  Amplitude tuple_value(std::size_t t) const { return tuple_values_[t]; }
  const FreqVector& point(std::size_t slot, std::uint32_t idx) const {
    return support_[slot][idx].first;
  }

  std::uint64_t total_multiplicity() const noexcept { return tuple_values_.size(); }

 private:
  std::vector<std::vector<std::pair<FreqVector, Amplitude>>> support_;
  std::vector<Group> groups_;
  std::vector<FreqVector> sums_;
  std::unordered_map<FreqVector, std::pair<std::uint32_t, std::uint32_t>, FreqVectorHash> buckets_;
  std::vector<std::uint32_t> tuples_;
  std::vector<Amplitude> tuple_values_;
};

/// Contribution of all kept tuples with signed sum n and Phi = mu.
struct LevelEntry {
  FreqVector n;
  ResonanceLevel mu = 0;
  Amplitude value;
  std::uint64_t count = 0;  // number of kept tuples (> 0 for every entry)
};

struct LevelQuery {
  std::optional<ResonanceLevel> mu;
  Restriction restriction = Restriction::None;
  std::optional<FreqVector> n_target;
  EvalMode mode = EvalMode::PairTable;
};

/// Every nonempty (n, mu) cell of the constrained sum, ordered by (n, mu).
/// Fields are used as given (no conjugation).
std::vector<LevelEntry> resonance_levels(std::span<const SpectralField> fields,
                                         const LevelQuery& query = {});

/// n -> sum over n = n_1 - n_2 + ... + n_{2k+1} of prod fields[l](n_l).
SpectralField signed_convolution(std::span<const SpectralField> fields,
                                 EvalMode mode = EvalMode::PairTable);

/// As signed_convolution, restricted to Phi = mu (if given) and to the
/// tuples selected by the restriction. Only n_target is evaluated when given.
SpectralField resonant_sum(std::span<const SpectralField> fields, std::optional<ResonanceLevel> mu,
                           Restriction restriction,
                           std::optional<FreqVector> n_target = std::nullopt,
                           EvalMode mode = EvalMode::PairTable);

/// Checks arity and dimensions; returns (d, k).
std::pair<int, int> check_fields(std::span<const SpectralField> fields);

namespace reference {

/// Tuple-by-tuple enumeration over the product of supports.
std::vector<LevelEntry> naive_levels(std::span<const SpectralField> fields, const LevelQuery& query);

}  // namespace reference

}  // namespace nlslab::multilinear
