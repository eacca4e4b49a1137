#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "twtsim/scenario.hpp"
#include "twtsim/search.hpp"

namespace twtsim::config {

/// Parse or validation failure; line is 0 when the problem is not tied to
/// one line (missing sections, cross-section invariants).
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(int line, const std::string& what);

    int line() const { return line_; }

  private:
    int line_;
};

struct RunSetup
{
    Scenario scenario;
    search::SearchSettings search;
};

/// Sectioned key = value text:
///
///   format = 1
///   [scenario]        duration_s, drain_s, seed, scheduler, cwnd_sample_s
///   [mac]             MacParams field names
///   [transport]       TransportParams field names
///   [station NAME]    standalone_mbps or phy_rate_mbps, rssi_dbm
///   [twt]             station, duty_pct + mf or sp_us + wi_us, offset_us
///   [traffic]         model, station, source, bitrate_mbps, VideoParams fields
///   [background]      NAME = streams
///   [search]          SearchSettings field names
///
/// The AP is implicit (id 0); stations get ids 1.. in file order.
RunSetup parse_config(const std::string& text);

RunSetup load_config(const std::string& path);

nlohmann::json scenario_to_json(const Scenario& sc);

}  // namespace twtsim::config
