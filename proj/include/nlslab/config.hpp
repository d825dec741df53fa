#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlslab/counting.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/estimates.hpp"
#include "nlslab/report.hpp"
#include "nlslab/spectral_flow.hpp"

namespace nlslab {

/// Raised for malformed or inconsistent configuration text. line() is the
/// 1-based line of the offending pair, or 0 when no single line is at fault.
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class Command { Count, Scan, Estimate, Extremize, Evolve };

std::string_view to_string(Command c);
std::optional<Command> command_from_string(std::string_view name);

/// Field sets for estimate runs.
enum class FieldKind { Delta, Box, Random, Counterexample };

/// Initial data for evolve runs.
enum class InitialKind { Gaussian, Delta, Random };

struct RunConfig {
  Command command = Command::Count;
  int d = 2;
  int k = 1;
  std::uint64_t seed = 0;
  std::string output_path;  // empty: <output dir>/<command>.<format>
  report::Format format = report::Format::Csv;
  int threads = 0;          // 0: OpenMP default

  // count, scan
  counting::CountQuery count = counting::CountQuery::make(counting::LemmaTag::NumberA, 2);
  double eta = 0.25;
  double C = 1.0;
  std::vector<double> R_grid{4.0, 8.0, 16.0};
  std::size_t samples = 200;
  counting::ScanRegime regime = counting::ScanRegime::Mixed;

  // estimate, extremize
  estimates::EstimateSpec spec = estimates::EstimateSpec::derive(estimates::EstimateTag::B1, 2, 1, 1.0);
  FieldKind fields = FieldKind::Delta;
  std::int64_t field_radius = 2;
  std::vector<std::int64_t> shells;  // DyadicBlock only
  std::int64_t box = 4;
  std::size_t iterations = 1000;
  bool start_counterexample = false;

  // evolve
  flow::FlowParams flow;
  double T = 0.1;
  double dt = 1e-3;
  std::size_t stride = 10;
  double s = 1.0;
  InitialKind initial = InitialKind::Gaussian;
  double amplitude = 0.5;
  bool include_state = false;
  std::string dump_path;
};

/// Parses flat `key = value` text with `#` comments. Every key must be
/// known and apply to the selected command; values are range-checked.
/// `command` fills in a missing `command` key and must agree with a present one.
RunConfig parse_config(std::string_view text, std::optional<Command> command = std::nullopt);

/// Keys accepted for a command, in documentation order.
std::vector<std::string_view> config_keys(Command c);

}  // namespace nlslab
