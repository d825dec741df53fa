#include "nlslab/spectral_flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "nlslab/errors.hpp"
#include "nlslab/parallel.hpp"

namespace nlslab::flow {

std::string_view to_string(Splitting s) {
  switch (s) {
    case Splitting::Full:
      return "Full";
    case Splitting::PrincipalAc:
      return "PrincipalAc";
    case Splitting::RemainderR:
      return "RemainderR";
  }
  return "?";
}

namespace {

bool finite(Amplitude a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

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

}  // namespace

void validate(const FlowParams& p) {
  if (p.d < 1 || p.d > FreqVector::kMaxDim) throw DimensionError("d must lie in 1..4");
  if (p.k < 1) throw ParameterError("k must be positive");
  if (p.box_radius < 1) throw ParameterError("Galerkin box radius must be >= 1");
  if (p.box_radius > 4096) throw ParameterError("Galerkin box radius too large");
  if (!finite(p.lambda) || !finite(p.c_const)) throw ParameterError("lambda and c must be finite");
  if (p.splitting != Splitting::Full) exceptional_regime(p.d, p.k);
  const long double tuples = std::pow(static_cast<long double>(2 * p.box_radius + 1),
                                      static_cast<long double>(p.d * (2 * p.k + 1)));
  if (tuples > static_cast<long double>(p.tuple_budget)) {
    throw BudgetError("interaction table would enumerate " + std::to_string(static_cast<double>(tuples)) +
                      " tuples, budget " + std::to_string(p.tuple_budget));
  }
}

InteractionTable::InteractionTable(const FlowParams& params)
    : d_(params.d), k_(params.k), box_(params.box_radius) {
  validate(params);
  points_ = box_points(d_, box_);
  const bool classify = !(d_ == 1 && k_ == 1);
  const ExceptionalRegime regime = classify ? exceptional_regime(d_, k_) : ExceptionalRegime::Empty;
  const std::size_t S = points_.size();
  const std::size_t w = width();

  struct Record {
    ResonanceLevel mu;
    bool in_a;
    std::uint32_t id;
  };
  std::vector<std::vector<Group>> out_groups(S);
  std::vector<std::vector<std::uint32_t>> out_tuples(S);

  parallel::for_each_chunk(
      S,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> idx(w);
        std::vector<FreqVector> entries(w);
        std::vector<Record> records;
        std::vector<std::uint32_t> raw;
        for (std::size_t o = begin; o < end; ++o) {
          const FreqVector& n = points_[o];
          records.clear();
          raw.clear();
          // Free entries 0..2k-1; the last one is fixed by the signed sum.
          auto rec = [&](auto&& self, std::size_t j, FreqVector partial) -> void {
            if (j + 1 == w) {
              const FreqVector last = n - partial;
              const auto li = index_of(last);
              if (li < 0) return;
              idx[j] = static_cast<std::uint32_t>(li);
              entries[j] = last;
              const ResonanceLevel mu = phi(n, entries);
              const bool in_a = classify && is_exceptional(classify_entries(entries, regime, d_, k_));
              records.push_back({mu, in_a, static_cast<std::uint32_t>(records.size())});
              raw.insert(raw.end(), idx.begin(), idx.end());
              return;
            }
            for (std::uint32_t i = 0; i < S; ++i) {
              idx[j] = i;
              entries[j] = points_[i];
              self(self, j + 1, entry_sign(j) > 0 ? partial + points_[i] : partial - points_[i]);
            }
          };
          rec(rec, 0, FreqVector::zero(d_));

          std::stable_sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
            if (a.mu != b.mu) return a.mu < b.mu;
            return a.in_a < b.in_a;
          });
          auto& groups = out_groups[o];
          auto& tuples = out_tuples[o];
          tuples.reserve(raw.size());
          for (std::size_t r = 0; r < records.size(); ++r) {
            if (groups.empty() || groups.back().mu != records[r].mu || groups.back().in_a != records[r].in_a) {
              groups.push_back({records[r].mu, records[r].in_a, static_cast<std::uint32_t>(r), 0});
            }
            ++groups.back().count;
            const auto* src = raw.data() + static_cast<std::size_t>(records[r].id) * w;
            tuples.insert(tuples.end(), src, src + w);
          }
        }
      },
      4);

  group_offset_.assign(1, 0);
  tuple_offset_.assign(1, 0);
  for (std::size_t o = 0; o < S; ++o) {
    groups_.insert(groups_.end(), out_groups[o].begin(), out_groups[o].end());
    tuples_.insert(tuples_.end(), out_tuples[o].begin(), out_tuples[o].end());
    group_offset_.push_back(groups_.size());
    tuple_offset_.push_back(tuple_offset_.back() + out_tuples[o].size() / w);
  }
}

std::int64_t InteractionTable::index_of(const FreqVector& n) const {
  if (n.dim() != d_ || n.max_abs() > box_) return -1;
  std::int64_t idx = 0;
  for (int i = 0; i < d_; ++i) idx = idx * (2 * box_ + 1) + (n[i] + box_);
  return idx;
}

InteractionTable build_interaction_table(const FlowParams& params) { return InteractionTable(params); }

State to_state(const SpectralField& f, const InteractionTable& table) {
  if (f.dim() != table.dim()) throw DimensionError("state dimension does not match the table");
  State s(table.points().size());
  for (const auto& [n, v] : f) {
    const auto i = table.index_of(n);
    if (i < 0) {
      throw PreconditionError("mode " + n.to_string() + " lies outside the Galerkin box of radius " +
                              std::to_string(table.box_radius()));
    }
    s[static_cast<std::size_t>(i)] = v;
  }
  return s;
}

SpectralField to_field(const State& s, const InteractionTable& table) {
  SpectralField f(table.dim(), table.box_radius());
  for (std::size_t i = 0; i < s.size(); ++i) f.set(table.points()[i], s[i]);
  return f;
}

void rhs_dense(const State& w, double t, const FlowParams& params, const InteractionTable& table, State& out) {
  const std::size_t S = table.points().size();
  const std::size_t width = table.width();
  out.assign(S, Amplitude{});
  State wc(S);
  for (std::size_t i = 0; i < S; ++i) wc[i] = std::conj(w[i]);
  const Amplitude coupling = params.c_const * params.lambda;
  const bool want_a = params.splitting != Splitting::PrincipalAc;
  const bool want_ac = params.splitting != Splitting::RemainderR;

  parallel::for_each_chunk(
      S,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t o = begin; o < end; ++o) {
          Amplitude acc{};
          for (const auto& g : table.groups(o)) {
            if (g.in_a ? !want_a : !want_ac) continue;
            Amplitude gsum{};
            for (std::uint32_t t_i = g.first; t_i < g.first + g.count; ++t_i) {
              const auto tup = table.tuple(o, t_i);
              Amplitude prod = w[tup[0]];
              for (std::size_t l = 1; l < width; ++l) prod *= (l % 2 == 0) ? w[tup[l]] : wc[tup[l]];
              gsum += prod;
            }
            acc += std::polar(1.0, t * static_cast<double>(g.mu)) * gsum;
          }
          out[o] = coupling * acc;
        }
      },
      16);
}

SpectralField rhs(const SpectralField& omega, double t, const FlowParams& params, const InteractionTable& table) {
  if (params.d != table.dim() || params.k != table.k() || params.box_radius != table.box_radius()) {
    throw ParameterError("interaction table was built for different parameters");
  }
  State out;
  rhs_dense(to_state(omega, table), t, params, table, out);
  return to_field(out, table);
}

namespace {

class Integrator {
 public:
  Integrator(const FlowParams& params, const InteractionTable& table) : params_(params), table_(table) {}

  void step(State& y, double t, double h) {
    const std::size_t S = y.size();
    tmp_.resize(S);
    rhs_dense(y, t, params_, table_, k1_);
    for (std::size_t i = 0; i < S; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
    rhs_dense(tmp_, t + 0.5 * h, params_, table_, k2_);
    for (std::size_t i = 0; i < S; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
    rhs_dense(tmp_, t + 0.5 * h, params_, table_, k3_);
    for (std::size_t i = 0; i < S; ++i) tmp_[i] = y[i] + h * k3_[i];
    rhs_dense(tmp_, t + h, params_, table_, k4_);
    for (std::size_t i = 0; i < S; ++i) y[i] += (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

  // Advances from t_from to t_to in steps of at most dt; returns steps taken.
  std::size_t advance(State& y, double t_from, double t_to, double dt, std::size_t step_offset) {
    const double span = t_to - t_from;
    if (span <= 0.0) return 0;
    const auto n = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
    for (std::size_t j = 0; j < n; ++j) {
      const double t = t_from + static_cast<double>(j) * dt;
      const double h = j + 1 == n ? t_to - t : dt;
      step(y, t, h);
      check(y, step_offset + j + 1);
    }
    return n;
  }

  static void check(const State& y, std::size_t step) {
    for (const auto& v : y) {
      if (!finite(v) || std::abs(v) > 1e150) throw DivergenceError(step, "state diverged");
    }
  }

 private:
  const FlowParams& params_;
  const InteractionTable& table_;
  State k1_, k2_, k3_, k4_, tmp_;
};

void check_time_args(double T, double dt, const FlowParams& params) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ParameterError("T must be finite and nonnegative");
  if (std::ceil(T / dt) > static_cast<double>(params.step_budget)) {
    throw BudgetError("T/dt exceeds the step budget");
  }
}

}  // namespace

std::vector<Snapshot> evolve(const SpectralField& omega0, double T, double dt, const FlowParams& params,
                             std::size_t stride, double t0) {
  check_time_args(T, dt, params);
  if (stride == 0) throw ParameterError("snapshot stride must be positive");
  if (omega0.dim() != params.d) throw DimensionError("initial data dimension does not match d");
  const InteractionTable table(params);
  State y = to_state(omega0, table);

  std::vector<Snapshot> out;
  out.push_back({t0, to_field(y, table)});
  if (T == 0.0) return out;

  Integrator integ(params, table);
  const auto n = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  for (std::size_t j = 0; j < n; ++j) {
    const double t = t0 + static_cast<double>(j) * dt;
    const double h = j + 1 == n ? (t0 + T) - t : dt;
    integ.step(y, t, h);
    Integrator::check(y, j + 1);
    if ((j + 1) % stride == 0 || j + 1 == n) {
      out.push_back({j + 1 == n ? t0 + T : t + dt, to_field(y, table)});
    }
  }
  return out;
}

Observables observables(const SpectralField& omega, double s) {
  Observables o;
  for (const auto& [n, v] : omega) o.mass += std::norm(v);
  o.sobolev = weighted_norm(omega, 2.0, s);
  return o;
}

namespace {

double hs_distance(const SpectralField& a, const SpectralField& b, double s) {
  SpectralField diff(a.dim(), std::max(a.box_radius(), b.box_radius()));
  for (const auto& [n, v] : a) diff.add(n, v);
  for (const auto& [n, v] : b) diff.add(n, -v);
  return weighted_norm(diff, 2.0, s);
}

}  // namespace

std::vector<UniquenessRow> uniqueness_experiment(const SpectralField& omega0, double T, const FlowParams& params,
                                                 std::span<const double> dt_list,
                                                 std::span<const std::int64_t> box_list, double s,
                                                 std::size_t snapshots) {
  if (dt_list.empty() || box_list.empty()) throw ParameterError("uniqueness experiment needs dt and box lists");
  if (snapshots == 0) throw ParameterError("need at least one snapshot");
  for (const double dt : dt_list) check_time_args(T, dt, params);

  struct Run {
    double dt;
    std::int64_t box;
    std::vector<SpectralField> snaps;
  };
  std::vector<Run> runs;
  for (const double dt : dt_list) {
    for (const std::int64_t box : box_list) {
      FlowParams p = params;
      p.box_radius = box;
      const InteractionTable table(p);
      State y = to_state(omega0.with_box(box), table);
      Integrator integ(p, table);
      Run run{dt, box, {}};
      std::size_t steps = 0;
      for (std::size_t m = 1; m <= snapshots; ++m) {
        const double a = T * static_cast<double>(m - 1) / static_cast<double>(snapshots);
        const double b = T * static_cast<double>(m) / static_cast<double>(snapshots);
        steps += integ.advance(y, a, b, dt, steps);
        run.snaps.push_back(to_field(y, table));
      }
      runs.push_back(std::move(run));
    }
  }

  const auto ref = std::min_element(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
    if (a.dt != b.dt) return a.dt < b.dt;
    return a.box > b.box;
  });
  std::vector<UniquenessRow> rows;
  for (const auto& run : runs) {
    UniquenessRow row;
    row.dt = run.dt;
    row.box_radius = run.box;
    for (std::size_t m = 0; m < snapshots; ++m) {
      row.distance = std::max(row.distance, hs_distance(run.snaps[m], ref->snaps[m], s));
    }
    const auto obs = observables(run.snaps.back(), s);
    row.final_sobolev = obs.sobolev;
    row.final_mass = obs.mass;
    rows.push_back(row);
  }
  return rows;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}

void put_f64(std::ostream& os, double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, sizeof v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated state dump");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw IoError("truncated state dump");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double x;
  std::memcpy(&x, &v, sizeof x);
  return x;
}

std::int32_t as_i32(std::uint32_t v) {
  std::int32_t r;
  std::memcpy(&r, &v, sizeof r);
  return r;
}

}  // namespace

void write_state(std::ostream& os, const SpectralField& omega, int k) {
  if (omega.box_radius() > INT32_MAX) throw ParameterError("box radius does not fit the dump header");
  put_u32(os, static_cast<std::uint32_t>(omega.dim()));
  put_u32(os, static_cast<std::uint32_t>(k));
  put_u32(os, static_cast<std::uint32_t>(omega.box_radius()));
  put_u32(os, static_cast<std::uint32_t>(omega.size()));
  for (const auto& [n, v] : omega) {
    for (int i = 0; i < n.dim(); ++i) put_u32(os, static_cast<std::uint32_t>(static_cast<std::int32_t>(n[i])));
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
  if (!os) throw IoError("failed to write state dump");
}

StateDump read_state(std::istream& is) {
  const auto d = as_i32(get_u32(is));
  const auto k = as_i32(get_u32(is));
  const auto box = as_i32(get_u32(is));
  const auto count = get_u32(is);
  if (d < 1 || d > FreqVector::kMaxDim || k < 1 || box < 0) throw IoError("malformed state dump header");
  StateDump dump{k, SpectralField(d, box)};
  std::vector<std::int64_t> coords(static_cast<std::size_t>(d));
  for (std::uint32_t e = 0; e < count; ++e) {
    for (auto& c : coords) c = as_i32(get_u32(is));
    const double re = get_f64(is);
    const double im = get_f64(is);
    try {
      dump.omega.set(FreqVector(std::span<const std::int64_t>(coords)), {re, im});
    } catch (const Error& err) {
      throw IoError(std::string("malformed state dump entry: ") + err.what());
    }
  }
  return dump;
}

}  // namespace nlslab::flow
