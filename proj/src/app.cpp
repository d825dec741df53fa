#include "nlslab/app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <new>
#include <random>
#include <sstream>

#include "nlslab/extremizer.hpp"
#include "nlslab/parallel.hpp"

namespace nlslab {

namespace {

using report::Table;
using report::Value;

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Points of {|n|_inf <= radius} in lexicographic order.
std::vector<FreqVector> box_points(int d, std::int64_t radius) {
  std::vector<FreqVector> out;
  std::vector<std::int64_t> c(static_cast<std::size_t>(d), -radius);
  while (true) {
    out.emplace_back(std::span<const std::int64_t>(c));
    int i = d - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == radius) c[static_cast<std::size_t>(i--)] = -radius;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<Value> count_row(const counting::CountReport& r, const RunConfig& cfg) {
  const auto& q = r.query;
  return {std::string(counting::to_string(q.tag)),
          std::int64_t{q.d},
          q.R,
          q.mu_star,
          r.exact_count,
          r.bound_value,
          r.ratio,
          q.n_star.to_string(),
          q.n_sub.to_string(),
          q.ball_center.to_string(),
          q.R1,
          q.R2,
          q.R3,
          cfg.eta,
          cfg.C};
}

const std::vector<std::string> kCountColumns = {"tag", "d",     "R",     "mu_star", "exact_count",
                                                "bound_value", "ratio", "n_star", "n_sub",
                                                "ball_center", "R1", "R2", "R3", "eta", "C"};

Table run_count(const RunConfig& cfg) {
  Table t{kCountColumns, {}};
  t.add_row(count_row(counting::count_constrained(cfg.count, cfg.eta, cfg.C), cfg));
  return t;
}

Table run_scan(const RunConfig& cfg) {
  const auto res = counting::scan_worst_case(cfg.count.tag, cfg.d, cfg.R_grid, cfg.samples, cfg.seed,
                                             cfg.eta, cfg.regime);
  auto columns = kCountColumns;
  columns.push_back("samples");
  columns.push_back("slope");
  Table t{columns, {}};
  for (const auto& r : res.rows) {
    auto row = count_row(r, cfg);
    row.push_back(static_cast<std::uint64_t>(cfg.samples));
    row.push_back(res.slope);
    t.add_row(std::move(row));
  }
  return t;
}

std::vector<SpectralField> estimate_fields(const RunConfig& cfg, estimates::EstimateSpec& spec) {
  const bool dyadic = spec.tag == estimates::EstimateTag::DyadicBlock;
  const std::size_t count = static_cast<std::size_t>(2 * cfg.k + (dyadic ? 2 : 1));
  std::vector<std::int64_t> shells = cfg.shells;
  if (shells.empty()) shells.assign(count, 1);
  std::vector<SpectralField> fields;
  switch (cfg.fields) {
    case FieldKind::Delta:
      for (std::size_t l = 0; l < count; ++l) fields.push_back(delta(FreqVector::zero(cfg.d)));
      break;
    case FieldKind::Box:
      for (std::size_t l = 0; l < count; ++l) fields.push_back(box_indicator(cfg.d, cfg.field_radius));
      break;
    case FieldKind::Random: {
      std::mt19937_64 rng(cfg.seed);
      for (std::size_t l = 0; l < count; ++l) {
        const std::int64_t radius = dyadic ? 2 * shells[l] : cfg.field_radius;
        SpectralField f(cfg.d, radius);
        for (const auto& n : box_points(cfg.d, radius)) {
          const double v = unit(rng);
          if (dyadic) {
            const double jb = japanese_bracket(n);
            if (jb < static_cast<double>(shells[l]) || jb >= 2.0 * static_cast<double>(shells[l])) continue;
          }
          f.set(n, v);
        }
        fields.push_back(std::move(f));
      }
      break;
    }
    case FieldKind::Counterexample: {
      if (cfg.d != 2 || cfg.k != 1) throw UnsupportedCase("counterexample fields need d=2, k=1");
      const auto ce = estimates::counterexample_family(std::max<std::int64_t>(cfg.field_radius, 1));
      fields.assign(ce.fields.begin(), ce.fields.end());
      if (!spec.q) spec.q = ce.q;
      if (!spec.mu) spec.mu = ce.mu;
      break;
    }
  }
  return fields;
}

Table run_estimate(const RunConfig& cfg) {
  auto spec = cfg.spec;
  const auto fields = estimate_fields(cfg, spec);
  estimates::validate(spec);
  const auto sides = estimates::estimate_sides(spec, fields);
  if (sides.rhs == 0.0) throw DegenerateInputError("estimate: right-hand side vanishes");
  Table t{{"tag", "d", "k", "s", "s1", "s2", "r", "sigma", "q", "mu", "restriction", "lhs", "rhs", "ratio"}, {}};
  t.add_row({std::string(estimates::to_string(spec.tag)), std::int64_t{spec.d}, std::int64_t{spec.k}, spec.s,
             spec.s1, spec.s2, spec.r, spec.sigma, std::int64_t{sides.q},
             spec.mu ? Value{*spec.mu} : Value{std::string()},
             std::string(multilinear::to_string(spec.restriction)), sides.lhs, sides.rhs,
             sides.lhs / sides.rhs});
  return t;
}

Table run_extremize(const RunConfig& cfg) {
  std::vector<SpectralField> start;
  if (cfg.start_counterexample) {
    if (cfg.d != 2 || cfg.k != 1) throw UnsupportedCase("counterexample start needs d=2, k=1");
    const auto ce = estimates::counterexample_family(cfg.box);
    start.assign(ce.fields.begin(), ce.fields.end());
  }
  const auto res = estimates::extremizer_search(cfg.spec, cfg.box, cfg.iterations, cfg.seed, start);
  Table t{{"tag", "d", "k", "s", "box", "iterations", "seed", "initial_ratio", "best_ratio", "accepted"}, {}};
  t.add_row({std::string(estimates::to_string(cfg.spec.tag)), std::int64_t{cfg.d}, std::int64_t{cfg.k},
             cfg.spec.s, cfg.box, static_cast<std::uint64_t>(cfg.iterations), cfg.seed, res.initial_ratio,
             res.best_ratio, static_cast<std::uint64_t>(res.accepted)});
  return t;
}

std::string state_string(const SpectralField& f) {
  std::string out;
  char buf[80];
  for (const auto& [n, v] : f) {
    if (!out.empty()) out += ';';
    std::snprintf(buf, sizeof buf, ":%.17g:%.17g", v.real(), v.imag());
    out += n.to_string() + buf;
  }
  return out;
}

Table run_evolve(const RunConfig& cfg) {
  const auto omega0 = initial_data(cfg);
  const auto snaps = flow::evolve(omega0, cfg.T, cfg.dt, cfg.flow, cfg.stride);
  std::vector<std::string> columns = {"t", "mass", "sobolev"};
  if (cfg.include_state) columns.push_back("state");
  Table t{columns, {}};
  for (const auto& snap : snaps) {
    const auto o = flow::observables(snap.omega, cfg.s);
    std::vector<Value> row = {snap.t, o.mass, o.sobolev};
    if (cfg.include_state) row.push_back(state_string(snap.omega));
    t.add_row(std::move(row));
  }
  if (!cfg.dump_path.empty()) {
    std::ostringstream os(std::ios::binary);
    flow::write_state(os, snaps.back().omega, cfg.k);
    report::write_atomic(cfg.dump_path, os.str());
  }
  return t;
}

}  // namespace

SpectralField initial_data(const RunConfig& cfg) {
  const std::int64_t N = cfg.flow.box_radius;
  SpectralField f(cfg.d, N);
  std::mt19937_64 rng(cfg.seed);
  switch (cfg.initial) {
    case InitialKind::Delta:
      f.set(FreqVector::zero(cfg.d), cfg.amplitude);
      break;
    case InitialKind::Gaussian:
      for (const auto& n : box_points(cfg.d, N)) {
        double phase = 0.0;
        for (int i = 0; i < cfg.d; ++i) phase += 0.5 * static_cast<double>(n[i]);
        f.set(n, std::polar(cfg.amplitude * std::exp(-0.5 * static_cast<double>(n.norm2())), phase));
      }
      break;
    case InitialKind::Random:
      for (const auto& n : box_points(cfg.d, N)) {
        const double re = unit(rng) - 0.5, im = unit(rng) - 0.5;
        const double decay = std::exp(-0.25 * static_cast<double>(n.norm2()));
        f.set(n, cfg.amplitude * decay * Amplitude(re, im));
      }
      break;
  }
  return f;
}

Table execute(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Count:
      return run_count(cfg);
    case Command::Scan:
      return run_scan(cfg);
    case Command::Estimate:
      return run_estimate(cfg);
    case Command::Extremize:
      return run_extremize(cfg);
    case Command::Evolve:
      return run_evolve(cfg);
  }
  throw ParameterError("unknown command");
}

std::string output_path(const RunConfig& cfg) {
  if (!cfg.output_path.empty()) return cfg.output_path;
  const char* dir = std::getenv("NLSLAB_OUTPUT_DIR");
  const std::filesystem::path base = dir && *dir ? dir : ".";
  return (base / (std::string(to_string(cfg.command)) + "." + std::string(report::to_string(cfg.format))))
      .string();
}

int run(const RunConfig& cfg) {
  try {
    if (cfg.threads > 0) parallel::set_threads(cfg.threads);
    const auto table = execute(cfg);
    report::emit_report(table, cfg.format, output_path(cfg));
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "nlslab: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "nlslab: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "nlslab: error: " << e.what() << '\n';
    return kExitEngine;
  } catch (const std::bad_alloc&) {
    std::cerr << "nlslab: error: out of memory\n";
    return kExitEngine;
  } catch (const std::exception& e) {
    std::cerr << "nlslab: error: " << e.what() << '\n';
    return kExitEngine;
  }
}

}  // namespace nlslab
