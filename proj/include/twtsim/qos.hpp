#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "twtsim/sim.hpp"
#include "twtsim/traffic.hpp"

namespace twtsim::qos {

/// Streaming QoS of the DUT over one session, measured at the server side.
struct QosReport
{
    double avg_throughput_mbps = 0.0;
    double interval_s = 1.0;
    std::vector<double> instantaneous_mbps;
    int underrun_events = 0;
    double underrun_time_s = 0.0;
    double throughput_variation = 0.0;  // coefficient of variation of instantaneous_mbps
    std::int64_t total_bytes = 0;
    double duration_s = 0.0;
};

/// A trace that references a burst the caller did not supply.
class InconsistentTrace : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Burst i underruns when its last byte arrives after release + ibt; the
/// excess is its underrun time. A burst never finished counts up to the end
/// of the trace.
QosReport compute_qos(const sim::SimTrace& trace, const std::vector<traffic::Burst>& bursts, double interval_s = 1.0);

/// Average throughput at least the bitrate and no more than max_underruns.
bool qos_pass(const QosReport& report, double bitrate_mbps, int max_underruns);

nlohmann::json to_json(const QosReport& r);

/// `t_s,mbps`, one row per bin start.
void write_instantaneous_csv(std::ostream& out, const QosReport& r);

}  // namespace twtsim::qos
