#include "nlslab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

namespace nlslab {

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Count:
      return "count";
    case Command::Scan:
      return "scan";
    case Command::Estimate:
      return "estimate";
    case Command::Extremize:
      return "extremize";
    case Command::Evolve:
      return "evolve";
  }
  return "?";
}

std::optional<Command> command_from_string(std::string_view name) {
  for (const Command c : {Command::Count, Command::Scan, Command::Estimate, Command::Extremize, Command::Evolve}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

namespace {

constexpr std::string_view kCommon[] = {"command", "d", "k", "seed", "output", "format", "threads"};
constexpr std::string_view kCount[] = {"lemma", "n_star", "n_sub", "ball_center", "mu_star",
                                       "R", "R1", "R2", "R3", "eta", "C"};
constexpr std::string_view kScan[] = {"lemma", "R_grid", "samples", "eta", "regime"};
constexpr std::string_view kEstimate[] = {"tag", "s", "s1", "s2", "r", "sigma", "q", "mu",
                                          "fields", "field_radius", "shells"};
constexpr std::string_view kExtremize[] = {"tag", "s", "s1", "s2", "r", "sigma", "q", "mu",
                                           "box", "iterations", "start"};
constexpr std::string_view kEvolve[] = {"lambda", "c", "box", "splitting", "T", "dt", "stride", "s",
                                        "initial", "amplitude", "include_state", "dump",
                                        "tuple_budget", "step_budget"};

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

class Pairs {
 public:
  explicit Pairs(std::string_view text) {
    std::size_t line = 0;
    while (!text.empty()) {
      ++line;
      const auto eol = text.find('\n');
      std::string_view raw = text.substr(0, eol);
      text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      raw = trim(raw);
      if (raw.empty()) continue;
      const auto eq = raw.find('=');
      if (eq == std::string_view::npos) throw ConfigError(line, "expected key=value");
      const std::string key(trim(raw.substr(0, eq)));
      if (key.empty()) throw ConfigError(line, "empty key");
      if (map_.count(key)) {
        throw ConfigError(line, "duplicate key '" + key + "' (first on line " +
                                    std::to_string(map_[key].line) + ")");
      }
      map_[key] = Entry{std::string(trim(raw.substr(eq + 1))), line};
    }
  }

  const Entry* get(std::string_view key) const {
    const auto it = map_.find(key);
    return it == map_.end() ? nullptr : &it->second;
  }
  const std::map<std::string, Entry, std::less<>>& all() const { return map_; }

 private:
  std::map<std::string, Entry, std::less<>> map_;
};

[[noreturn]] void bad(const Entry& e, std::string_view key, const std::string& why) {
  throw ConfigError(e.line, std::string(key) + ": " + why + " (got '" + e.value + "')");
}

std::int64_t parse_int(const Entry& e, std::string_view key, std::int64_t lo, std::int64_t hi) {
  std::int64_t v = 0;
  const char* end = e.value.data() + e.value.size();
  const auto [p, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc{} || p != end || e.value.empty()) bad(e, key, "expected an integer");
  if (v < lo || v > hi) {
    bad(e, key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

std::uint64_t parse_u64(const Entry& e, std::string_view key) {
  std::uint64_t v = 0;
  const char* end = e.value.data() + e.value.size();
  const auto [p, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc{} || p != end || e.value.empty()) bad(e, key, "expected an unsigned integer");
  return v;
}

double to_double(const Entry& e, std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end || text.empty()) bad(e, key, "expected a number");
  return v;
}

double parse_double(const Entry& e, std::string_view key, double lo, double hi, bool lo_open = false) {
  const double v = to_double(e, key, e.value);
  if (std::isnan(v) || v < lo || v > hi || (lo_open && v == lo)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "must lie in %c%g, %g]", lo_open ? '(' : '[', lo, hi);
    bad(e, key, buf);
  }
  return v;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s = s.substr(comma + 1);
  }
  return out;
}

FreqVector parse_vector(const Entry& e, std::string_view key, int d) {
  const auto parts = split_list(e.value);
  if (static_cast<int>(parts.size()) != d) {
    bad(e, key, "expected " + std::to_string(d) + " comma-separated integers");
  }
  std::vector<std::int64_t> c;
  for (const auto part : parts) {
    Entry one{std::string(part), e.line};
    c.push_back(parse_int(one, key, -FreqVector::kCoordBound, FreqVector::kCoordBound));
  }
  return FreqVector(std::span<const std::int64_t>(c));
}

Amplitude parse_complex(const Entry& e, std::string_view key) {
  const auto parts = split_list(e.value);
  if (parts.size() > 2) bad(e, key, "expected 're' or 're,im'");
  const double re = to_double(e, key, parts[0]);
  const double im = parts.size() == 2 ? to_double(e, key, parts[1]) : 0.0;
  if (!std::isfinite(re) || !std::isfinite(im)) bad(e, key, "must be finite");
  return {re, im};
}

bool parse_bool(const Entry& e, std::string_view key) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  bad(e, key, "expected true or false");
}

template <class T, std::size_t N>
T parse_choice(const Entry& e, std::string_view key, const std::pair<std::string_view, T> (&options)[N]) {
  for (const auto& [name, value] : options) {
    if (e.value == name) return value;
  }
  std::string names;
  for (const auto& [name, value] : options) names += (names.empty() ? "" : ", ") + std::string(name);
  bad(e, key, "expected one of " + names);
}

void check_keys(const Pairs& pairs, Command cmd) {
  const auto allowed = config_keys(cmd);
  for (const auto& [key, entry] : pairs.all()) {
    if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
    bool known = false;
    for (const Command c : {Command::Count, Command::Scan, Command::Estimate, Command::Extremize,
                            Command::Evolve}) {
      const auto keys = config_keys(c);
      known = known || std::find(keys.begin(), keys.end(), key) != keys.end();
    }
    throw ConfigError(entry.line, known ? "key '" + key + "' does not apply to command " +
                                              std::string(to_string(cmd))
                                        : "unknown key '" + key + "'");
  }
}

void parse_spec(const Pairs& pairs, RunConfig& cfg) {
  using estimates::EstimateTag;
  EstimateTag tag = EstimateTag::B1;
  if (const auto* e = pairs.get("tag")) {
    const auto t = estimates::estimate_tag_from_string(e->value);
    if (!t) bad(*e, "tag", "unknown estimate tag");
    tag = *t;
  }
  double s = 1.0;
  if (const auto* e = pairs.get("s")) s = parse_double(*e, "s", -64.0, 64.0);
  auto spec = estimates::EstimateSpec::derive(tag, cfg.d, cfg.k, s);

  // Explicit exponents are accepted only when they agree with the derived row.
  const auto check = [&](std::string_view key, double derived) {
    const auto* e = pairs.get(key);
    if (!e) return;
    const double v = to_double(*e, key, e->value);
    const bool same = std::isinf(derived) ? v == derived
                                          : std::abs(v - derived) <= 1e-12 * std::max(1.0, std::abs(derived));
    if (!same) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "inconsistent with the derived value %.17g", derived);
      bad(*e, key, buf);
    }
  };
  check("s1", spec.s1);
  check("s2", spec.s2);
  check("r", spec.r);
  check("sigma", spec.sigma);
  if (const auto* e = pairs.get("q")) spec.q = static_cast<int>(parse_int(*e, "q", 1, 2 * cfg.k + 1));
  if (const auto* e = pairs.get("mu")) {
    spec.mu = parse_int(*e, "mu", std::numeric_limits<std::int64_t>::min() / 4,
                        std::numeric_limits<std::int64_t>::max() / 4);
  }
  cfg.spec = spec;
}

}  // namespace

std::vector<std::string_view> config_keys(Command c) {
  std::vector<std::string_view> keys(std::begin(kCommon), std::end(kCommon));
  const auto add = [&](const auto& extra) { keys.insert(keys.end(), std::begin(extra), std::end(extra)); };
  switch (c) {
    case Command::Count:
      add(kCount);
      break;
    case Command::Scan:
      add(kScan);
      break;
    case Command::Estimate:
      add(kEstimate);
      break;
    case Command::Extremize:
      add(kExtremize);
      break;
    case Command::Evolve:
      add(kEvolve);
      break;
  }
  return keys;
}

RunConfig parse_config(std::string_view text, std::optional<Command> command) {
  const Pairs pairs(text);
  RunConfig cfg;

  if (const auto* cmd = pairs.get("command")) {
    static constexpr std::pair<std::string_view, Command> kCommands[] = {
        {"count", Command::Count},         {"scan", Command::Scan},     {"estimate", Command::Estimate},
        {"extremize", Command::Extremize}, {"evolve", Command::Evolve},
    };
    cfg.command = parse_choice(*cmd, "command", kCommands);
    if (command && *command != cfg.command) {
      bad(*cmd, "command", "disagrees with the requested command " + std::string(to_string(*command)));
    }
  } else if (command) {
    cfg.command = *command;
  } else {
    throw ConfigError(0, "missing key 'command'");
  }
  check_keys(pairs, cfg.command);

  if (cfg.command == Command::Evolve) cfg.d = 1;
  if (const auto* e = pairs.get("d")) cfg.d = static_cast<int>(parse_int(*e, "d", 1, FreqVector::kMaxDim));
  if (const auto* e = pairs.get("k")) cfg.k = static_cast<int>(parse_int(*e, "k", 1, 16));
  if (const auto* e = pairs.get("seed")) cfg.seed = parse_u64(*e, "seed");
  if (const auto* e = pairs.get("output")) {
    if (e->value.empty()) bad(*e, "output", "empty path");
    cfg.output_path = e->value;
  }
  if (const auto* e = pairs.get("format")) {
    static constexpr std::pair<std::string_view, report::Format> kFormats[] = {
        {"csv", report::Format::Csv}, {"json", report::Format::Json}};
    cfg.format = parse_choice(*e, "format", kFormats);
  }
  if (const auto* e = pairs.get("threads")) cfg.threads = static_cast<int>(parse_int(*e, "threads", 0, 4096));
  if (const auto* e = pairs.get("eta")) cfg.eta = parse_double(*e, "eta", 0.0, 16.0);

  switch (cfg.command) {
    case Command::Count:
    case Command::Scan: {
      auto tag = counting::LemmaTag::NumberA;
      if (const auto* e = pairs.get("lemma")) {
        const auto t = counting::lemma_from_string(e->value);
        if (!t) bad(*e, "lemma", "unknown lemma tag");
        tag = *t;
      }
      cfg.count = counting::CountQuery::make(tag, cfg.d);
      const double rmax = static_cast<double>(FreqVector::kCoordBound);
      if (const auto* e = pairs.get("n_star")) cfg.count.n_star = parse_vector(*e, "n_star", cfg.d);
      if (const auto* e = pairs.get("n_sub")) cfg.count.n_sub = parse_vector(*e, "n_sub", cfg.d);
      if (const auto* e = pairs.get("ball_center")) cfg.count.ball_center = parse_vector(*e, "ball_center", cfg.d);
      if (const auto* e = pairs.get("mu_star")) {
        cfg.count.mu_star = parse_int(*e, "mu_star", std::numeric_limits<std::int64_t>::min() / 4,
                                      std::numeric_limits<std::int64_t>::max() / 4);
      }
      if (const auto* e = pairs.get("R")) cfg.count.R = parse_double(*e, "R", 1.0, rmax, true);
      if (const auto* e = pairs.get("R1")) cfg.count.R1 = parse_double(*e, "R1", 1.0, rmax, true);
      if (const auto* e = pairs.get("R2")) cfg.count.R2 = parse_double(*e, "R2", 1.0, rmax, true);
      if (const auto* e = pairs.get("R3")) cfg.count.R3 = parse_double(*e, "R3", 1.0, rmax, true);
      if (const auto* e = pairs.get("C")) cfg.C = parse_double(*e, "C", 0.0, 1e12, true);
      if (const auto* e = pairs.get("R_grid")) {
        cfg.R_grid.clear();
        for (const auto part : split_list(e->value)) {
          const Entry one{std::string(part), e->line};
          cfg.R_grid.push_back(parse_double(one, "R_grid", 1.0, rmax, true));
        }
      }
      if (const auto* e = pairs.get("samples")) {
        cfg.samples = static_cast<std::size_t>(parse_int(*e, "samples", 0, 100'000'000));
      }
      if (const auto* e = pairs.get("regime")) {
        static constexpr std::pair<std::string_view, counting::ScanRegime> kRegimes[] = {
            {"mixed", counting::ScanRegime::Mixed}, {"jarnik", counting::ScanRegime::Jarnik}};
        cfg.regime = parse_choice(*e, "regime", kRegimes);
      }
      break;
    }
    case Command::Estimate:
    case Command::Extremize: {
      parse_spec(pairs, cfg);
      if (const auto* e = pairs.get("fields")) {
        static constexpr std::pair<std::string_view, FieldKind> kFields[] = {
            {"delta", FieldKind::Delta},
            {"box", FieldKind::Box},
            {"random", FieldKind::Random},
            {"counterexample", FieldKind::Counterexample}};
        cfg.fields = parse_choice(*e, "fields", kFields);
      }
      if (const auto* e = pairs.get("field_radius")) cfg.field_radius = parse_int(*e, "field_radius", 0, 256);
      if (const auto* e = pairs.get("shells")) {
        for (const auto part : split_list(e->value)) {
          const Entry one{std::string(part), e->line};
          cfg.shells.push_back(parse_int(one, "shells", 1, 1 << 20));
        }
        if (cfg.shells.size() != static_cast<std::size_t>(2 * cfg.k + 2)) {
          bad(*e, "shells", "expected 2k+2 = " + std::to_string(2 * cfg.k + 2) + " values");
        }
      }
      if (const auto* e = pairs.get("box")) cfg.box = parse_int(*e, "box", 1, 64);
      if (const auto* e = pairs.get("iterations")) {
        cfg.iterations = static_cast<std::size_t>(parse_int(*e, "iterations", 0, 1'000'000'000));
      }
      if (const auto* e = pairs.get("start")) {
        static constexpr std::pair<std::string_view, bool> kStarts[] = {{"random", false},
                                                                         {"counterexample", true}};
        cfg.start_counterexample = parse_choice(*e, "start", kStarts);
      }
      break;
    }
    case Command::Evolve: {
      cfg.flow.d = cfg.d;
      cfg.flow.k = cfg.k;
      if (const auto* e = pairs.get("lambda")) cfg.flow.lambda = parse_complex(*e, "lambda");
      if (const auto* e = pairs.get("c")) cfg.flow.c_const = parse_complex(*e, "c");
      if (const auto* e = pairs.get("box")) cfg.flow.box_radius = parse_int(*e, "box", 1, 4096);
      if (const auto* e = pairs.get("splitting")) {
        static constexpr std::pair<std::string_view, flow::Splitting> kSplit[] = {
            {"full", flow::Splitting::Full},
            {"principal", flow::Splitting::PrincipalAc},
            {"remainder", flow::Splitting::RemainderR}};
        cfg.flow.splitting = parse_choice(*e, "splitting", kSplit);
      }
      if (const auto* e = pairs.get("tuple_budget")) cfg.flow.tuple_budget = parse_u64(*e, "tuple_budget");
      if (const auto* e = pairs.get("step_budget")) cfg.flow.step_budget = parse_u64(*e, "step_budget");
      if (const auto* e = pairs.get("T")) cfg.T = parse_double(*e, "T", 0.0, 1e6);
      if (const auto* e = pairs.get("dt")) cfg.dt = parse_double(*e, "dt", 0.0, 1e6, true);
      if (const auto* e = pairs.get("stride")) {
        cfg.stride = static_cast<std::size_t>(parse_int(*e, "stride", 1, 1'000'000'000));
      }
      if (const auto* e = pairs.get("s")) cfg.s = parse_double(*e, "s", -64.0, 64.0);
      if (const auto* e = pairs.get("initial")) {
        static constexpr std::pair<std::string_view, InitialKind> kInitial[] = {
            {"gaussian", InitialKind::Gaussian}, {"delta", InitialKind::Delta}, {"random", InitialKind::Random}};
        cfg.initial = parse_choice(*e, "initial", kInitial);
      }
      if (const auto* e = pairs.get("amplitude")) cfg.amplitude = parse_double(*e, "amplitude", 0.0, 1e6);
      if (const auto* e = pairs.get("include_state")) cfg.include_state = parse_bool(*e, "include_state");
      if (const auto* e = pairs.get("dump")) {
        if (e->value.empty()) bad(*e, "dump", "empty path");
        cfg.dump_path = e->value;
      }
      if (cfg.T / cfg.dt > static_cast<double>(cfg.flow.step_budget)) {
        throw ConfigError(pairs.get("dt") ? pairs.get("dt")->line : 0, "T/dt exceeds step_budget");
      }
      break;
    }
  }
  return cfg;
}

}  // namespace nlslab
