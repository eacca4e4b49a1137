#include <gtest/gtest.h>

#include "twtsim/config.hpp"

using namespace twtsim;
using twtsim::config::ConfigError;
using twtsim::config::parse_config;

namespace {

const char* kMinimal = R"(format = 1
[scenario]
duration_s = 10
[station a]
standalone_mbps = 50
)";

int error_line(const std::string& text)
{
    try
    {
        parse_config(text);
    }
    catch (const ConfigError& e)
    {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(Config, BundledScenario)
{
    const auto setup = config::load_config(TWTSIM_TEST_CONFIG);
    const auto& sc = setup.scenario;
    ASSERT_EQ(sc.stations.size(), 5u);
    const std::vector<int> rssi{-46, -45, -37, -36};
    const std::vector<double> standalone{63.5, 75.4, 163.0, 95.0};
    for (int i = 0; i < 4; ++i)
    {
        EXPECT_EQ(sc.stations[i + 1].rssi_dbm, rssi[i]);
        EXPECT_DOUBLE_EQ(sc.stations[i + 1].standalone_mbps, standalone[i]);
        EXPECT_NEAR(mac::saturated_throughput_mbps(sc.stations[i + 1].phy_rate_mbps, sc.mac), standalone[i], 1e-6);
    }
    EXPECT_EQ(sc.twt_station(), 4);
    EXPECT_EQ(sc.background.size(), 3u);
    for (const auto& b : sc.background)
        EXPECT_EQ(b.streams, 8);
    EXPECT_EQ(sc.dut.model, DutModel::cbr);
    EXPECT_DOUBLE_EQ(sc.dut.video.weibull_scale_lambda, 54210.0);
    EXPECT_EQ(setup.search.seeds, 5);
    EXPECT_EQ(setup.search.table4_duties, (std::vector<double>{25, 30}));
}

TEST(Config, BundledMatchesBuiltInScenario)
{
    const auto parsed = config::load_config(TWTSIM_TEST_CONFIG).scenario;
    auto builtin = paper_setup_scenario();
    EXPECT_EQ(config::scenario_to_json(parsed), config::scenario_to_json(builtin));
}

TEST(Config, ScheduleEchoedInDump)
{
    const auto setup = config::load_config(TWTSIM_TEST_CONFIG);
    const auto j = config::scenario_to_json(setup.scenario);
    EXPECT_EQ(j["stations"][4]["twt"]["sp_us"], 8191);
    EXPECT_EQ(j["stations"][4]["twt"]["wi_us"], 19114);
}

TEST(Config, EmptyFileListsRequiredSections)
{
    try
    {
        parse_config("");
        FAIL() << "expected ConfigError";
    }
    catch (const ConfigError& e)
    {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("format"), std::string::npos);
        EXPECT_NE(msg.find("[scenario]"), std::string::npos);
        EXPECT_NE(msg.find("[station"), std::string::npos);
    }
}

TEST(Config, MinimalDefaults)
{
    const auto setup = parse_config(kMinimal);
    EXPECT_EQ(setup.scenario.stations.size(), 2u);
    EXPECT_EQ(setup.scenario.dut.model, DutModel::none);
    EXPECT_DOUBLE_EQ(setup.scenario.duration_s, 10.0);
    EXPECT_EQ(setup.scenario.mac.txop_limit_us, 5484);
}

TEST(Config, UnknownKeyReportsLine)
{
    EXPECT_EQ(error_line(std::string(kMinimal) + "[mac]\nslot_us = 9\nbogus = 1\n"), 8);
    EXPECT_EQ(error_line("format = 1\n[scenario]\n\n# comment\nspeed = 3\n[station a]\nphy_rate_mbps = 5\n"), 5);
}

TEST(Config, MalformedValues)
{
    EXPECT_EQ(error_line("format = 1\n[scenario]\nduration_s = fast\n[station a]\nphy_rate_mbps = 5\n"), 3);
    EXPECT_EQ(error_line("format = 2\n[scenario]\n[station a]\nphy_rate_mbps = 5\n"), 1);
    EXPECT_EQ(error_line("format = 1\n[scenario\n"), 2);
    EXPECT_EQ(error_line("format = 1\n[scenario]\nduration_s\n"), 3);
    EXPECT_EQ(error_line(std::string(kMinimal) + "[scenario]\n"), 6);
    EXPECT_EQ(error_line(std::string(kMinimal) + "[weather]\n"), 6);
}

TEST(Config, MissingRequiredFields)
{
    EXPECT_EQ(error_line("format = 1\n[scenario]\n[station a]\nrssi_dbm = -40\n"), 3);
    EXPECT_EQ(error_line(std::string(kMinimal) + "[twt]\nduty_pct = 30\n"), 6);
    EXPECT_EQ(error_line(std::string(kMinimal) + "[traffic]\nstation = a\n"), 6);
    EXPECT_EQ(error_line(std::string(kMinimal) + "[traffic]\nmodel = cbr\n"), 6);
    EXPECT_EQ(error_line(std::string(kMinimal) + "[traffic]\nmodel = cbr\nstation = b\n"), 8);
}

TEST(Config, InvariantViolations)
{
    // Background traffic may not target the TWT station.
    const std::string twt_bg = std::string(kMinimal) + "[twt]\nstation = a\nduty_pct = 30\n[background]\na = 8\n";
    EXPECT_THROW(parse_config(twt_bg), ConfigError);
    EXPECT_EQ(error_line(std::string(kMinimal) + "[twt]\nstation = a\nduty_pct = 130\n"), 6);
    EXPECT_EQ(error_line(std::string(kMinimal) + "[twt]\nstation = a\nduty_pct = 30\nmf = 3\n"), 6);
    EXPECT_EQ(error_line(std::string(kMinimal) + "[scenario]\n"), 6);
    EXPECT_THROW(parse_config("format = 1\n[scenario]\nduration_s = -1\n[station a]\nphy_rate_mbps = 5\n"),
                 ConfigError);
}

TEST(Config, ExplicitScheduleAndTraffic)
{
    const auto setup = parse_config(std::string(kMinimal) +
                                    "[twt]\nstation = a\nsp_us = 1000\nwi_us = 3000\noffset_us = 50\n"
                                    "[traffic]\nmodel = vbr\nstation = a\nbitrate_mbps = 8\nibt_mean_s = 4\n"
                                    "[search]\nseeds = 2\ntable4_duties = 10, 20, 40\n");
    const auto& t = *setup.scenario.stations[1].twt;
    EXPECT_EQ(t.sp_us, 1000);
    EXPECT_EQ(t.wi_us, 3000);
    EXPECT_EQ(t.offset_us, 50);
    EXPECT_EQ(setup.scenario.dut.model, DutModel::vbr);
    EXPECT_DOUBLE_EQ(setup.scenario.dut.video.weibull_scale_lambda, 6950.0 * 8 / 2);
    EXPECT_DOUBLE_EQ(setup.scenario.dut.video.ibt_mean_s, 4.0);
    EXPECT_EQ(setup.search.seeds, 2);
    EXPECT_EQ(setup.search.table4_duties.size(), 3u);
}
