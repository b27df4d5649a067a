#pragma once

#include "aquasi/cli/run_config.hpp"

#include <iosfwd>

namespace aquasi::cli {

// Each command reads its inputs, runs, and writes its outputs; informational
// lines go to `log`. Failures surface as aquasi::Error.
void cmd_denoise(const RunConfig& cfg, std::ostream& log);
void cmd_deblur(const RunConfig& cfg, std::ostream& log);
void cmd_upsample(const RunConfig& cfg, std::ostream& log);
void cmd_degrade(const RunConfig& cfg, std::ostream& log);
void cmd_residual_hist(const RunConfig& cfg, std::ostream& log);
/// Writes metrics.csv and one image per method into the output directory.
void cmd_compare(const RunConfig& cfg, std::ostream& log);

void run_task(const RunConfig& cfg, std::ostream& log);

/// Full command-line entry point. Returns the process exit code; errors are
/// reported on `err` as "error: <kind>: <detail>".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace aquasi::cli
