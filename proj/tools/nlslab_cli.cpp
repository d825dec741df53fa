#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nlslab/app.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Lattice counting, multilinear estimates and truncated NLS flows"};
  std::string command, config_path, output, format;
  std::uint64_t seed = 0;
  int threads = 0;
  cli.add_option("command", command, "count, scan, estimate, extremize or evolve")
      ->check(CLI::IsMember({"count", "scan", "estimate", "extremize", "evolve"}));
  cli.add_option("--config", config_path, "key=value configuration file");
  cli.add_option("--output", output, "report path (default: $NLSLAB_OUTPUT_DIR/<command>.<format>)");
  auto* format_opt = cli.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = cli.add_option("--seed", seed, "random seed");
  auto* threads_opt = cli.add_option("--threads", threads, "OpenMP threads")->check(CLI::Range(1, 4096));
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? 0 : nlslab::kExitConfig;
  }

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "nlslab: I/O error: cannot read " << config_path << '\n';
      return nlslab::kExitIo;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  nlslab::RunConfig cfg;
  try {
    cfg = command.empty() ? nlslab::parse_config(text)
                          : nlslab::parse_config(text, nlslab::command_from_string(command));
  } catch (const nlslab::ConfigError& e) {
    std::cerr << "nlslab: config error: " << e.what() << '\n';
    return nlslab::kExitConfig;
  }
  if (!output.empty()) cfg.output_path = output;
  if (*format_opt) cfg.format = format == "json" ? nlslab::report::Format::Json : nlslab::report::Format::Csv;
  if (*seed_opt) cfg.seed = seed;
  if (*threads_opt) cfg.threads = threads;
  return nlslab::run(cfg);
}
