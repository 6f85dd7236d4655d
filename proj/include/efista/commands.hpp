#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "efista/run_config.hpp"

namespace efista {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDiverged = 2;

struct CommandOptions {
  std::optional<std::string> out_dir;  ///< overrides output_dir
  std::optional<std::uint64_t> seed;   ///< overrides seed
  bool quiet = false;
};

/// Blur -> noise -> solve -> report. Writes observed.pgm, deblurred.pgm and
/// trace.csv. Exit 2 if the run blew up or its objective ended above its
/// minimum (objective_rising), with artifacts still written.
int cmd_deblur(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out);
/// Objective-vs-iteration curves; one CSV per variant (and order n).
int cmd_curves(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out);
/// EFISTA objective at probe_iter vs p, one CSV per image.
int cmd_sweep(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out);
/// PSNR table over images x noise levels x {FISTA, IFISTA, EFISTA}.
int cmd_table(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out);

/// Entry point shared by the `efista` binary: parses flags, loads the
/// config, dispatches, and maps exceptions to exit code 1.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace efista
