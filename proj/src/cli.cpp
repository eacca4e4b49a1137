#include "twtsim/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "json.hpp"
#include "twtsim/config.hpp"
#include "twtsim/experiments.hpp"
#include "twtsim/qos.hpp"
#include "twtsim/search.hpp"
#include "twtsim/sim.hpp"

namespace twtsim::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kOutEnv = "TWTSIM_OUT";

/// Raised after a search's artifacts are written but no schedule passed.
class NotConverged : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    body(out);
    if (!out)
        throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const nlohmann::json& j)
{
    write_file(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

double template_duty(const Scenario& sc)
{
    const int sta = sc.twt_station();
    if (sta < 0)
        throw std::invalid_argument("command needs a [twt] section to pick the duty cycle");
    return std::round(twt::duty_cycle(*sc.stations[static_cast<std::size_t>(sta)].twt));
}

void run(const std::string& command, const config::RunSetup& setup, const fs::path& out)
{
    const Scenario& sc = setup.scenario;
    const auto& ss = setup.search;

    if (command == "simulate")
    {
        const auto trace = sim::run_sim(sc);
        write_json(out / "scenario.json", config::scenario_to_json(sc));
        write_file(out / "deliveries.csv", [&](std::ostream& o) { sim::write_deliveries_csv(o, trace); });
        write_file(out / "airtime.csv", [&](std::ostream& o) { sim::write_airtime_csv(o, trace); });
        write_file(out / "burst_serve.csv", [&](std::ostream& o) { sim::write_burst_serve_csv(o, trace); });
        write_file(out / "bursts.csv", [&](std::ostream& o) { traffic::write_bursts_csv(o, dut_bursts(sc)); });
        if (sc.cwnd_sample_s > 0.0)
            write_file(out / "cwnd.csv", [&](std::ostream& o) { sim::write_cwnd_csv(o, trace); });
    }
    else if (command == "qos")
    {
        const auto trace = sim::run_sim(sc);
        const auto report = qos::compute_qos(trace, dut_bursts(sc), ss.interval_s);
        auto j = qos::to_json(report);
        j["pass"] = qos::qos_pass(report, sc.dut.video.bitrate_mbps, ss.max_underruns);
        j["background_mbps"] = sim::aggregate_throughput_mbps(trace, trace.dut_station);
        write_json(out / "qos_report.json", j);
        write_file(out / "instantaneous.csv", [&](std::ostream& o) { qos::write_instantaneous_csv(o, report); });
    }
    else if (command == "search")
    {
        const auto r = search::run_search(sc, ss);
        write_file(out / "phase1_curve.csv", [&](std::ostream& o) { search::write_phase1_csv(o, r.phase1_curve); });
        write_file(out / "phase2_curve.csv", [&](std::ostream& o) { search::write_phase2_csv(o, r.phase2_curve); });
        write_file(out / "phase3_sessions.csv",
                   [&](std::ostream& o) { search::write_sessions_csv(o, r.phase3_sessions); });
        write_json(out / "search_result.json", search::to_json(r));
        if (!r.converged)
            throw NotConverged("no schedule up to 100% duty met the QoS target");
    }
    else if (command == "sweep-duty")
    {
        const auto curve = search::duty_sweep(sc, ss);
        write_file(out / "duty_sweep.csv", [&](std::ostream& o) { search::write_phase1_csv(o, curve); });
    }
    else if (command == "sweep-mf")
    {
        const auto curve = search::mf_sweep(sc, template_duty(sc), ss);
        write_file(out / "mf_sweep.csv", [&](std::ostream& o) { search::write_phase2_csv(o, curve); });
    }
    else if (command == "table3")
    {
        const auto rows = experiments::table3(sc, ss.master_seed, ss.seeds, ss.interval_s);
        write_file(out / "table3.csv", [&](std::ostream& o) { experiments::write_table3_csv(o, rows); });
    }
    else if (command == "table4")
    {
        const auto cells = experiments::table4(sc, ss.table4_duties, ss.master_seed, ss.seeds, ss.interval_s);
        write_file(out / "table4.csv", [&](std::ostream& o) { experiments::write_qos_cells_csv(o, cells); });
    }
    else if (command == "table5")
    {
        const auto cells = experiments::table5(sc, ss.master_seed, ss.seeds, ss.interval_s);
        write_file(out / "table5.csv", [&](std::ostream& o) { experiments::write_qos_cells_csv(o, cells); });
    }
    else
        throw std::invalid_argument("unknown command '" + command + "'");
}

int report_error(const fs::path& out, const std::string& kind, const std::string& message, int line, int code)
{
    nlohmann::json j{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (line > 0)
        j["line"] = line;
    std::cerr << j.dump() << '\n';
    std::error_code ec;
    fs::create_directories(out, ec);
    if (!ec)
    {
        std::ofstream f(out / "error.json", std::ios::binary);
        f << j.dump(2) << '\n';
    }
    return code;
}

}  // namespace

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names{"simulate",   "qos",      "search", "sweep-duty",
                                                "sweep-mf",   "table3",   "table4", "table5"};
    return names;
}

std::string resolve_out_dir(const std::optional<std::string>& flag)
{
    if (flag && !flag->empty())
        return *flag;
    if (const char* env = std::getenv(kOutEnv); env && *env)
        return env;
    return "out";
}

int run_command(const RunConfig& cfg)
{
    const fs::path out = cfg.out_dir.empty() ? fs::path("out") : fs::path(cfg.out_dir);
    try
    {
        auto setup = config::load_config(cfg.config_path);
        if (cfg.seed)
        {
            setup.scenario.seed = *cfg.seed;
            setup.search.master_seed = *cfg.seed;
        }
        fs::create_directories(out);
        fs::remove(out / "error.json");
        run(cfg.command, setup, out);
        return exit_ok;
    }
    catch (const config::ConfigError& e)
    {
        return report_error(out, "config", e.what(), e.line(), exit_error);
    }
    catch (const search::InfeasibleTarget& e)
    {
        return report_error(out, "infeasible_target", e.what(), 0, exit_not_converged);
    }
    catch (const NotConverged& e)
    {
        return report_error(out, "not_converged", e.what(), 0, exit_not_converged);
    }
    catch (const std::invalid_argument& e)
    {
        return report_error(out, "validation", e.what(), 0, exit_error);
    }
    catch (const std::exception& e)
    {
        return report_error(out, "runtime", e.what(), 0, exit_error);
    }
}

}  // namespace twtsim::cli
