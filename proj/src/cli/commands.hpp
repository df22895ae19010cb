#pragma once

#include <ostream>
#include <string_view>

#include "cli/config.hpp"

namespace midasvol::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kDataError = 3,
    kConvergenceError = 4,
};

/// Seed used for optimizer multi-starts when the config gives none.
inline constexpr std::uint64_t kDefaultSeed = 20221014;

// Each command writes into cfg.output and logs progress to `log`.
int cmd_describe(const RunConfig& cfg, std::ostream& log);
int cmd_fit_garch_midas(const RunConfig& cfg, int jobs, std::ostream& log);
int cmd_fit_dcc(const RunConfig& cfg, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, std::ostream& log);

/// Dispatches by subcommand name and maps exceptions to exit codes.
int run_command(std::string_view command, const RunConfig& cfg, int jobs, std::ostream& log);

}  // namespace midasvol::cli
