#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twtsim/mac.hpp"
#include "twtsim/traffic.hpp"
#include "twtsim/transport.hpp"
#include "twtsim/twt.hpp"

namespace twtsim {

enum class StationRole
{
    ap,
    client
};

struct Station
{
    int id = 0;
    std::string name;
    StationRole role = StationRole::client;
    double phy_rate_mbps = 0.0;
    std::optional<twt::TwtSchedule> twt;
    int rssi_dbm = 0;
    double standalone_mbps = 0.0;  // configured saturated throughput, 0 if the PHY rate was given directly
};

/// `streams` parallel saturated flows from the AP to one client.
struct BackgroundFlows
{
    int dst = 0;
    int streams = 0;
};

enum class DutModel
{
    none,
    cbr,
    vbr,
    saturated
};

struct DutTraffic
{
    DutModel model = DutModel::none;
    traffic::VideoParams video;
    int dst = -1;
    transport::FlowSource src = transport::FlowSource::remote_server;
};

/// How the AP picks among eligible downlink queues after winning the channel.
enum class ApScheduler
{
    twt_priority,  // a gated client inside its service period is served first
    round_robin
};

struct Scenario
{
    std::vector<Station> stations;  // index == id; station 0 is the AP
    std::vector<BackgroundFlows> background;
    DutTraffic dut;
    double duration_s = 120.0;
    double drain_s = 30.0;  // extra time allowed for the DUT to finish its last bursts
    std::uint64_t seed = 1;
    mac::MacParams mac;
    transport::TransportParams transport;
    ApScheduler scheduler = ApScheduler::twt_priority;
    double cwnd_sample_s = 0.0;  // 0 disables cwnd tracing

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    /// Id of the station carrying a TWT schedule, or -1.
    int twt_station() const;

    int station_id(const std::string& name) const;
};

/// The default four-client BSS: three background clients and the DUT, with
/// PHY rates back-solved from their standalone throughputs.
Scenario paper_setup_scenario();

/// Bursts the DUT source will release in this scenario. Deterministic in
/// (scenario.seed, dut traffic parameters).
std::vector<traffic::Burst> dut_bursts(const Scenario& scenario);

std::string to_string(DutModel m);
std::string to_string(ApScheduler s);

}  // namespace twtsim
