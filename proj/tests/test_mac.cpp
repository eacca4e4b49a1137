#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "twtsim/mac.hpp"
#include "twtsim/sim.hpp"

using namespace twtsim;
using namespace twtsim::mac;

TEST(MacParams, DefaultsValidate)
{
    MacParams m;
    EXPECT_NO_THROW(m.validate());
    EXPECT_EQ(m.max_backoff_stage(), 6);
    m.cw_min = 14;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m = MacParams{};
    m.cw_max = 15;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m = MacParams{};
    m.slot_us = 0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(Backoff, StageZeroRange)
{
    MacParams m;
    Rng rng(1);
    int hi = 0;
    for (int i = 0; i < 10000; ++i)
    {
        const int v = backoff_draw(0, m, rng);
        ASSERT_GE(v, 0);
        ASSERT_LE(v, 15);
        hi = std::max(hi, v);
    }
    EXPECT_EQ(hi, 15);
}

TEST(Backoff, WindowDoublesThenCaps)
{
    MacParams m;
    Rng rng(2);
    for (int stage = 0; stage <= 10; ++stage)
    {
        const int cw = std::min(m.cw_max, (m.cw_min + 1) * (1 << std::min(stage, 6)) - 1);
        int hi = 0;
        for (int i = 0; i < 20000; ++i)
        {
            const int v = backoff_draw(stage, m, rng);
            ASSERT_LE(v, cw);
            hi = std::max(hi, v);
        }
        EXPECT_GT(hi, cw * 9 / 10) << "stage " << stage;
    }
}

TEST(Backoff, UniformByChiSquare)
{
    MacParams m;
    Rng rng(3);
    std::vector<int> counts(16, 0);
    const int n = 100'000;
    for (int i = 0; i < n; ++i)
        ++counts[static_cast<std::size_t>(backoff_draw(0, m, rng))];
    const double expected = n / 16.0;
    double chi2 = 0.0;
    for (int c : counts)
        chi2 += (c - expected) * (c - expected) / expected;
    // 15 degrees of freedom, upper 0.1 % point.
    EXPECT_LT(chi2, 37.70);
}

TEST(Aggregate, Unconstrained)
{
    MacParams m;
    EXPECT_EQ(aggregate(1'000'000'000, 1000.0, 1'000'000'000, m), m.max_ampdu_mpdus);
}

TEST(Aggregate, NothingFitsBelowOverhead)
{
    MacParams m;
    EXPECT_EQ(aggregate(1'000'000, 95.0, m.per_frame_overhead_us - 1, m), 0);
    EXPECT_EQ(aggregate(0, 95.0, 10'000, m), 0);
    // Overhead fits but not a single MPDU.
    EXPECT_EQ(aggregate(1'000'000, 95.0, m.per_frame_overhead_us + 100, m), 0);
}

TEST(Aggregate, WindowOfOneServicePeriodAtMfEight)
{
    MacParams m;
    const double t_mpdu = 1500.0 * 8.0 / 95.0;
    // Window alone: lift the TXOP cap so only the 8191 us window binds.
    m.txop_limit_us = 100'000;
    const auto by_window = static_cast<int>(std::min(64.0, std::floor((8191 - 100) / t_mpdu)));
    EXPECT_EQ(aggregate(1'000'000, 95.0, 8191, m), by_window);
    // With the default TXOP the smaller of the two limits binds.
    m = MacParams{};
    const auto by_txop = static_cast<int>(std::floor((5484 - 100) / t_mpdu));
    EXPECT_EQ(aggregate(1'000'000, 95.0, 8191, m), std::min(by_window, by_txop));
}

TEST(Aggregate, QueueLimitsCount)
{
    MacParams m;
    EXPECT_EQ(aggregate(1500, 95.0, 10'000, m), 1);
    EXPECT_EQ(aggregate(1501, 95.0, 10'000, m), 2);
    EXPECT_EQ(aggregate(15'000, 95.0, 10'000, m), 10);
}

TEST(Aggregate, ExchangeFitsWindow)
{
    MacParams m;
    for (std::int64_t w = 0; w < 7000; w += 37)
        for (double rate : {20.0, 95.0, 300.0})
        {
            const int n = aggregate(10'000'000, rate, w, m);
            if (n > 0)
                ASSERT_LE(m.per_frame_overhead_us + n * payload_airtime_us(1500, rate),
                          static_cast<double>(std::min(w, m.txop_limit_us)) + 1e-9);
        }
}

TEST(PhyRate, BackSolveReproducesStandaloneThroughput)
{
    MacParams m;
    for (double target : {63.5, 75.4, 163.0, 95.0})
    {
        const double phy = phy_rate_for_throughput(target, m);
        EXPECT_NEAR(saturated_throughput_mbps(phy, m), target, 1e-6 * target);
        EXPECT_GT(phy, target);
    }
}

TEST(PhyRate, AnalyticThroughputMatchesOracle)
{
    MacParams m;
    for (double phy : {50.0, 120.0, 400.0})
        EXPECT_NEAR(saturated_throughput_mbps(phy, m),
                    oracle::single_contender_mbps(phy, 1500, 5484, 100, 34, 9, 15, 64), 1e-9);
}

TEST(RunSim, SingleContenderNearAirtimeBound)
{
    for (double standalone : {63.5, 95.0, 163.0})
    {
        auto sc = fixture::lone_client(DutModel::saturated, standalone);
        sc.duration_s = 10.0;
        sc.drain_s = 0.0;
        const auto trace = sim::run_sim(sc);
        const double measured = static_cast<double>(sim::delivered_bytes(trace, 1)) * 8 / 10.0 / 1e6;
        const double bound = oracle::single_contender_mbps(sc.stations[1].phy_rate_mbps, 1500, 5484, 100, 34, 9, 15,
                                                           64);
        EXPECT_NEAR(measured, bound, 0.15 * bound) << standalone;
        EXPECT_LE(measured, bound * 1.01);
    }
}
