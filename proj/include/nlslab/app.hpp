#pragma once

#include <string>

#include "nlslab/config.hpp"
#include "nlslab/report.hpp"

namespace nlslab {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitEngine = 2;
inline constexpr int kExitIo = 3;

/// Runs the configured command and returns its report without writing it.
/// Throws the engine's errors.
report::Table execute(const RunConfig& cfg);

/// The report path: output_path, else $NLSLAB_OUTPUT_DIR (or the working
/// directory) joined with "<command>.<format>".
std::string output_path(const RunConfig& cfg);

/// execute() plus the atomic report write. Errors are printed to stderr and
/// mapped to exit codes.
int run(const RunConfig& cfg);

/// Initial data of an evolve run.
SpectralField initial_data(const RunConfig& cfg);

}  // namespace nlslab
