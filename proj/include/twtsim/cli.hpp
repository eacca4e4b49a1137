#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twtsim::cli {

enum ExitCode : int
{
    exit_ok = 0,
    exit_error = 1,
    exit_not_converged = 2,
};

struct RunConfig
{
    std::string config_path;
    std::string command;
    std::optional<std::uint64_t> seed;  // overrides both the scenario seed and the search master seed
    std::string out_dir;
};

const std::vector<std::string>& commands();

/// Flag beats the TWTSIM_OUT environment variable, which beats "out".
std::string resolve_out_dir(const std::optional<std::string>& flag);

/// Runs one command and writes its artifacts under cfg.out_dir. Failures are
/// reported as JSON on stderr and in out_dir/error.json.
int run_command(const RunConfig& cfg);

}  // namespace twtsim::cli
