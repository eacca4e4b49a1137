#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "twtsim/cli.hpp"

int main(int argc, char** argv)
{
    using namespace twtsim::cli;

    CLI::App app{"TWT schedule search and Wi-Fi streaming simulator"};
    RunConfig cfg;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", cfg.config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
    app.add_option("--command", cfg.command, "Command to run")->required()->check(CLI::IsMember(commands()));
    app.add_option("--seed", seed, "Seed override");
    app.add_option("--out", out, "Output directory (default: $TWTSIM_OUT or ./out)");
    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_error;
    }
    cfg.seed = seed;
    cfg.out_dir = resolve_out_dir(out);
    return run_command(cfg);
}
