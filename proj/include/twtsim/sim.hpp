#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "twtsim/scenario.hpp"

namespace twtsim::sim {

struct Delivery
{
    double time_s = 0.0;
    int station = 0;
    int flow = 0;
    std::int64_t bytes = 0;
};

enum class AirtimeKind
{
    downlink,
    uplink,
    collision
};

/// One busy period of the channel. `station` is the client on the link, or
/// -1 for a collision.
struct Airtime
{
    double start_s = 0.0;
    double end_s = 0.0;
    int station = 0;
    AirtimeKind kind = AirtimeKind::downlink;
};

struct BurstServe
{
    int burst_index = 0;
    double serve_start_s = 0.0;
    double serve_end_s = 0.0;
};

struct CwndSample
{
    double time_s = 0.0;
    int flow = 0;
    double cwnd_segments = 0.0;
    double ssthresh_segments = 0.0;
    std::int64_t bytes_in_flight = 0;
};

struct FlowInfo
{
    int id = 0;
    int dst = 0;
    transport::FlowKind kind = transport::FlowKind::saturated;
    transport::FlowSource src = transport::FlowSource::local_ap;
    std::int64_t generated_bytes = 0;  // handed to the network, retransmissions excluded
    std::int64_t dropped_segments = 0;
};

struct SimTrace
{
    double duration_s = 0.0;  // nominal session length
    double end_s = 0.0;       // when the event loop stopped (session plus drain)
    int dut_station = -1;
    int dut_flow = -1;
    std::vector<FlowInfo> flows;
    std::vector<Delivery> deliveries;
    std::vector<Airtime> airtime;
    std::vector<BurstServe> dut_burst_serve;
    std::vector<CwndSample> cwnd;
};

/// Runs one seeded simulation. Throws std::invalid_argument if the scenario
/// does not validate; no event executes in that case.
SimTrace run_sim(const Scenario& scenario);

/// Bytes delivered to `station` in [0, trace.duration_s).
std::int64_t delivered_bytes(const SimTrace& trace, int station);

/// Aggregate Mbit/s delivered in-session to every client except `excluded`.
double aggregate_throughput_mbps(const SimTrace& trace, int excluded_station);

void write_deliveries_csv(std::ostream& out, const SimTrace& trace);
void write_airtime_csv(std::ostream& out, const SimTrace& trace);
void write_burst_serve_csv(std::ostream& out, const SimTrace& trace);
void write_cwnd_csv(std::ostream& out, const SimTrace& trace);

}  // namespace twtsim::sim
