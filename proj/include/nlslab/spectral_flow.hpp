#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "nlslab/lattice.hpp"
#include "nlslab/spectral_field.hpp"

namespace nlslab::flow {

enum class Splitting { Full, PrincipalAc, RemainderR };

std::string_view to_string(Splitting s);

/// d/dt w(n) = c lambda sum_{n = n_1 - n_2 + ... + n_{2k+1}} e^{i t Phi} w(n_1) conj(w(n_2)) ... w(n_{2k+1})
/// on the box |n|_inf <= box_radius; inputs and output stay in the box.
///
/// With w(t, n) = e^{i t |n|^2} u_hat(t, n) and u = sum_n u_hat(n) e^{i n.x},
/// the equation i u_t + Laplacian u = lambda |u|^{2k} u becomes the system
/// above with c = -i, which is the default.
struct FlowParams {
  int d = 1;
  int k = 1;
  Amplitude lambda{1.0, 0.0};
  std::int64_t box_radius = 4;
  Amplitude c_const{0.0, -1.0};
  Splitting splitting = Splitting::Full;
  std::uint64_t tuple_budget = 50'000'000;  // cap on (2N+1)^{d(2k+1)}
  std::uint64_t step_budget = 10'000'000;
};

void validate(const FlowParams& p);

/// All admissible tuples grouped by output, resonance level and
/// exceptional-set flag.
class InteractionTable {
 public:
  struct Group {
    ResonanceLevel mu = 0;
    bool in_a = false;
    std::uint32_t first = 0;  // tuples [first, first + count) of the output
    std::uint32_t count = 0;
  };

  explicit InteractionTable(const FlowParams& params);

  int dim() const noexcept { return d_; }
  int k() const noexcept { return k_; }
  std::int64_t box_radius() const noexcept { return box_; }
  const std::vector<FreqVector>& points() const noexcept { return points_; }
  /// Index of a box point in points(), or -1.
  std::int64_t index_of(const FreqVector& n) const;

  std::span<const Group> groups(std::size_t out) const {
    return {groups_.data() + group_offset_[out], group_offset_[out + 1] - group_offset_[out]};
  }
  /// Point indices of tuple t of output `out` (2k+1 entries).
  std::span<const std::uint32_t> tuple(std::size_t out, std::size_t t) const {
    return {tuples_.data() + (tuple_offset_[out] + t) * width(), width()};
  }
  std::size_t width() const noexcept { return static_cast<std::size_t>(2 * k_ + 1); }
  std::uint64_t total_tuples() const noexcept { return tuple_offset_.back(); }
  std::size_t tuple_count(std::size_t out) const { return tuple_offset_[out + 1] - tuple_offset_[out]; }

 private:
  int d_, k_;
  std::int64_t box_;
  std::vector<FreqVector> points_;
  std::vector<Group> groups_;
  std::vector<std::size_t> group_offset_;
  std::vector<std::uint32_t> tuples_;
  std::vector<std::size_t> tuple_offset_;
};

InteractionTable build_interaction_table(const FlowParams& params);

/// Dense state over table.points().
using State = std::vector<Amplitude>;

State to_state(const SpectralField& f, const InteractionTable& table);
SpectralField to_field(const State& s, const InteractionTable& table);

void rhs_dense(const State& w, double t, const FlowParams& params, const InteractionTable& table, State& out);

SpectralField rhs(const SpectralField& omega, double t, const FlowParams& params,
                  const InteractionTable& table);

struct Snapshot {
  double t = 0.0;
  SpectralField omega;
};

/// Classical RK4 from t0 to t0 + T with step dt (the last step is shortened
/// when dt does not divide T). Snapshots every `stride` steps plus the end.
std::vector<Snapshot> evolve(const SpectralField& omega0, double T, double dt, const FlowParams& params,
                             std::size_t stride = 1, double t0 = 0.0);

struct Observables {
  double mass = 0.0;
  double sobolev = 0.0;
};

Observables observables(const SpectralField& omega, double s);

struct UniquenessRow {
  double dt = 0.0;
  std::int64_t box_radius = 0;
  double distance = 0.0;  // sup over snapshot times of the H^s distance to the reference run
  double final_sobolev = 0.0;
  double final_mass = 0.0;
};

/// Runs every (dt, box) pair on the same data and compares with the finest
/// run (smallest dt, largest box) at `snapshots` equally spaced times.
std::vector<UniquenessRow> uniqueness_experiment(const SpectralField& omega0, double T, const FlowParams& params,
                                                 std::span<const double> dt_list,
                                                 std::span<const std::int64_t> box_list, double s,
                                                 std::size_t snapshots = 8);

/// Little-endian dump: int32 d, k, box_radius, count, then per entry the
/// int32 coordinates and float64 re, im.
void write_state(std::ostream& os, const SpectralField& omega, int k);

struct StateDump {
  int k = 0;
  SpectralField omega;
};

StateDump read_state(std::istream& is);

namespace reference {

/// Tuple-by-tuple right-hand side with no table and no grouping.
SpectralField naive_rhs(const SpectralField& omega, double t, const FlowParams& params);

}  // namespace reference

}  // namespace nlslab::flow
