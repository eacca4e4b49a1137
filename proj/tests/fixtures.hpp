#pragma once

#include <optional>
#include <sstream>
#include <string>

#include "twtsim/scenario.hpp"
#include "twtsim/sim.hpp"

namespace fixture {

/// AP plus one client fed by `model` at the given standalone rate.
inline twtsim::Scenario lone_client(twtsim::DutModel model, double standalone_mbps = 95.0,
                                    std::optional<twtsim::twt::TwtSchedule> twt = std::nullopt)
{
    using namespace twtsim;
    Scenario sc = paper_setup_scenario();
    sc.stations.resize(2);
    sc.stations[1] = paper_setup_scenario().stations[4];
    sc.stations[1].id = 1;
    sc.stations[1].standalone_mbps = standalone_mbps;
    sc.stations[1].phy_rate_mbps = mac::phy_rate_for_throughput(standalone_mbps, sc.mac);
    sc.stations[1].twt = twt;
    sc.background.clear();
    sc.dut.model = model;
    sc.dut.dst = 1;
    if (model == DutModel::saturated)
        sc.dut.src = transport::FlowSource::local_ap;
    return sc;
}

inline std::string deliveries_csv(const twtsim::sim::SimTrace& t)
{
    std::ostringstream o;
    twtsim::sim::write_deliveries_csv(o, t);
    return o.str();
}

inline std::string airtime_csv(const twtsim::sim::SimTrace& t)
{
    std::ostringstream o;
    twtsim::sim::write_airtime_csv(o, t);
    return o.str();
}

}  // namespace fixture
