#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "twtsim/qos.hpp"
#include "twtsim/scenario.hpp"

namespace twtsim::experiments {

/// What the harness keeps from one simulated session.
struct SessionOutcome
{
    qos::QosReport qos;
    double background_mbps = 0.0;  // in-session aggregate to non-DUT clients
    double offered_mbps = 0.0;     // DUT bytes due within the session
};

SessionOutcome evaluate_session(const Scenario& scenario, double interval_s);

/// Runs independent sessions on a small thread pool. Results are returned in
/// input order, so output never depends on scheduling.
std::vector<SessionOutcome> evaluate_sessions(const std::vector<Scenario>& scenarios, double interval_s);

/// Seed of evaluation iteration `i` under a master seed. Every phase and grid
/// point reuses the same seeds.
std::uint64_t iteration_seed(std::uint64_t master, int iteration);

/// Seed reserved for out-of-sample checks; never used by the search itself.
std::uint64_t held_out_seed(std::uint64_t master);

struct MeanStd
{
    double mean = 0.0;
    double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& values);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Table-style experiments. Each iteration uses iteration_seed(master, i).

struct Table3Row
{
    std::string model;
    int iteration = 0;
    double no_dut_mbps = 0.0;
    double dut_without_twt_mbps = 0.0;
    double dut_with_twt_mbps = 0.0;
};

/// Aggregate non-TWT throughput without the DUT, with the DUT but no TWT,
/// and with the DUT under the scenario's schedule; CBR then VBR.
std::vector<Table3Row> table3(const Scenario& tmpl, std::uint64_t master, int iterations, double interval_s);

struct QosCell
{
    std::string label;
    int iteration = 0;
    double qos1_mbps = 0.0;
    int qos2_underruns = 0;
    double underrun_time_s = 0.0;
};

/// CBR sessions at each duty with the scenario's MF.
std::vector<QosCell> table4(const Scenario& tmpl, const std::vector<double>& duties, std::uint64_t master,
                            int iterations, double interval_s);

/// CBR and VBR sessions under the scenario's schedule.
std::vector<QosCell> table5(const Scenario& tmpl, std::uint64_t master, int iterations, double interval_s);

void write_table3_csv(std::ostream& out, const std::vector<Table3Row>& rows);
void write_qos_cells_csv(std::ostream& out, const std::vector<QosCell>& cells);

/// Copy of `tmpl` with the DUT's TWT schedule set from (duty, mf); duty 100
/// gives an always-awake agreement.
Scenario with_schedule(const Scenario& tmpl, double duty_percent, int mf);

Scenario with_model(const Scenario& tmpl, DutModel model);

}  // namespace twtsim::experiments
