#include "twtsim/scenario.hpp"

#include <set>
#include <stdexcept>

namespace twtsim {

namespace {

constexpr std::uint64_t kTrafficStream = 1;

}  // namespace

void Scenario::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("scenario: " + what); };
    if (!(duration_s > 0.0))
        fail("duration_s must be positive");
    if (!(drain_s >= 0.0))
        fail("drain_s must be non-negative");
    if (!(cwnd_sample_s >= 0.0))
        fail("cwnd_sample_s must be non-negative");
    mac.validate();
    transport.validate();
    if (stations.empty() || stations[0].role != StationRole::ap)
        fail("station 0 must be the AP");
    int twt_count = 0;
    std::set<std::string> names;
    for (std::size_t i = 0; i < stations.size(); ++i)
    {
        const auto& s = stations[i];
        if (s.id != static_cast<int>(i))
            fail("station ids must match their position");
        if (i > 0 && s.role != StationRole::client)
            fail("only station 0 may be an AP");
        if (!(s.phy_rate_mbps > 0.0))
            fail("station '" + s.name + "' needs a positive PHY rate");
        if (!names.insert(s.name).second)
            fail("duplicate station name '" + s.name + "'");
        if (s.twt)
        {
            if (s.role == StationRole::ap)
                fail("the AP cannot carry a TWT schedule");
            s.twt->validate();
            ++twt_count;
        }
    }
    if (twt_count > 1)
        fail("at most one station may carry a TWT schedule");
    for (const auto& b : background)
    {
        if (b.dst <= 0 || b.dst >= static_cast<int>(stations.size()))
            fail("background flow destination is not a client");
        if (stations[b.dst].twt)
            fail("background flows may not target the TWT station");
        if (b.streams <= 0)
            fail("background stream count must be positive");
    }
    if (dut.model != DutModel::none)
    {
        if (dut.dst <= 0 || dut.dst >= static_cast<int>(stations.size()))
            fail("DUT traffic destination is not a client");
        if (dut.model != DutModel::saturated && dut.video.bitrate_mbps > 0.0)
            dut.video.validate();
    }
}

int Scenario::twt_station() const
{
    for (const auto& s : stations)
        if (s.twt)
            return s.id;
    return -1;
}

int Scenario::station_id(const std::string& name) const
{
    for (const auto& s : stations)
        if (s.name == name)
            return s.id;
    throw std::invalid_argument("scenario: unknown station '" + name + "'");
}

Scenario paper_setup_scenario()
{
    Scenario sc;
    auto add = [&](std::string name, StationRole role, int rssi, double standalone) {
        Station st;
        st.id = static_cast<int>(sc.stations.size());
        st.name = std::move(name);
        st.role = role;
        st.rssi_dbm = rssi;
        st.standalone_mbps = standalone;
        st.phy_rate_mbps = standalone > 0.0 ? mac::phy_rate_for_throughput(standalone, sc.mac) : 1.0;
        sc.stations.push_back(std::move(st));
    };
    add("ap", StationRole::ap, 0, 0.0);
    // Downlink airtime uses the destination's rate; the AP's own entry is nominal.
    sc.stations[0].phy_rate_mbps = 1.0;
    add("client1", StationRole::client, -46, 63.5);
    add("client2", StationRole::client, -45, 75.4);
    add("client3", StationRole::client, -37, 163.0);
    add("dut", StationRole::client, -36, 95.0);
    sc.stations[4].twt = twt::schedule_from(30.0, 8);
    sc.background = {{1, 8}, {2, 8}, {3, 8}};
    sc.dut.model = DutModel::cbr;
    sc.dut.video = traffic::VideoParams::for_bitrate(15.6);
    sc.dut.dst = 4;
    sc.dut.src = transport::FlowSource::remote_server;
    return sc;
}

std::vector<traffic::Burst> dut_bursts(const Scenario& scenario)
{
    switch (scenario.dut.model)
    {
        case DutModel::cbr:
            return traffic::generate_cbr_bursts(scenario.dut.video, scenario.duration_s);
        case DutModel::vbr: {
            Rng rng(derive_seed(scenario.seed, kTrafficStream));
            return traffic::generate_vbr_bursts(scenario.dut.video, scenario.duration_s, rng);
        }
        case DutModel::none:
        case DutModel::saturated:
            break;
    }
    return {};
}

std::string to_string(DutModel m)
{
    switch (m)
    {
        case DutModel::none: return "none";
        case DutModel::cbr: return "cbr";
        case DutModel::vbr: return "vbr";
        case DutModel::saturated: return "saturated";
    }
    return "none";
}

std::string to_string(ApScheduler s)
{
    return s == ApScheduler::twt_priority ? "twt_priority" : "round_robin";
}

}  // namespace twtsim
