#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "twtsim/qos.hpp"
#include "twtsim/sim.hpp"

using namespace twtsim;

namespace {

traffic::Burst burst(int index, double release, double ibt, std::int64_t bytes)
{
    traffic::Burst b;
    b.index = index;
    b.release_time_s = release;
    b.inter_burst_time_s = ibt;
    b.size_bytes = bytes;
    return b;
}

sim::SimTrace trace_of(double duration, std::vector<sim::BurstServe> serve, std::vector<sim::Delivery> deliveries = {})
{
    sim::SimTrace t;
    t.duration_s = duration;
    t.end_s = duration;
    t.dut_station = 1;
    t.dut_flow = 0;
    t.dut_burst_serve = std::move(serve);
    t.deliveries = std::move(deliveries);
    return t;
}

}  // namespace

TEST(ComputeQos, ServedBeforeDeadlineIsNoUnderrun)
{
    const auto r = qos::compute_qos(trace_of(12.0, {{0, 0.0, 5.2}}), {burst(0, 0.0, 6.0, 1000)});
    EXPECT_EQ(r.underrun_events, 0);
    EXPECT_DOUBLE_EQ(r.underrun_time_s, 0.0);
}

TEST(ComputeQos, LateServeCountsExcess)
{
    const auto r = qos::compute_qos(trace_of(12.0, {{0, 0.0, 7.5}}), {burst(0, 0.0, 6.0, 1000)});
    EXPECT_EQ(r.underrun_events, 1);
    EXPECT_DOUBLE_EQ(r.underrun_time_s, 1.5);
}

TEST(ComputeQos, UnservedBurstRunsToTraceEnd)
{
    auto t = trace_of(12.0, {});
    t.end_s = 20.0;
    const auto r = qos::compute_qos(t, {burst(0, 6.0, 6.0, 1000)});
    EXPECT_EQ(r.underrun_events, 1);
    EXPECT_DOUBLE_EQ(r.underrun_time_s, 8.0);
}

TEST(ComputeQos, AverageThroughput)
{
    std::vector<sim::Delivery> d;
    for (int i = 0; i < 120; ++i)
        d.push_back({i + 0.5, 1, 0, 250'000});
    d.push_back({1.0, 2, 1, 999'999});  // other station, ignored
    const auto r = qos::compute_qos(trace_of(120.0, {}, d), {});
    EXPECT_EQ(r.total_bytes, 30'000'000);
    EXPECT_DOUBLE_EQ(r.avg_throughput_mbps, 2.0);
    EXPECT_DOUBLE_EQ(r.throughput_variation, 0.0);
    ASSERT_EQ(r.instantaneous_mbps.size(), 120u);
}

TEST(ComputeQos, BinningConservesBytes)
{
    std::vector<sim::Delivery> d;
    std::int64_t total = 0;
    for (int i = 0; i < 5000; ++i)
    {
        const std::int64_t b = 1500 * (1 + i % 7);
        d.push_back({i * 0.0199, 1, 0, b});
        total += b;
    }
    for (double interval : {0.1, 0.25, 1.0, 3.0})
    {
        const auto r = qos::compute_qos(trace_of(100.0, {}, d), {}, interval);
        const double mbit = std::accumulate(r.instantaneous_mbps.begin(), r.instantaneous_mbps.end(), 0.0) * interval;
        EXPECT_NEAR(mbit, static_cast<double>(total) * 8 / 1e6, 1e-6);
        EXPECT_EQ(r.total_bytes, total);
    }
}

TEST(ComputeQos, VariationIsPopulationCv)
{
    std::vector<sim::Delivery> d{{0.5, 1, 0, 125'000}, {1.5, 1, 0, 375'000}};
    const auto r = qos::compute_qos(trace_of(2.0, {}, d), {});
    // Series {1, 3}: mean 2, population sd 1.
    EXPECT_DOUBLE_EQ(r.throughput_variation, 0.5);
}

TEST(ComputeQos, UnderrunTimeIsSumOfExcess)
{
    std::vector<traffic::Burst> bursts;
    std::vector<sim::BurstServe> serve;
    double expected = 0.0;
    for (int i = 0; i < 10; ++i)
    {
        bursts.push_back(burst(i, 6.0 * i, 6.0, 100));
        const double end = 6.0 * i + 4.0 + 0.5 * i;
        serve.push_back({i, 6.0 * i, end});
        expected += std::max(0.0, end - 6.0 * i - 6.0);
    }
    const auto r = qos::compute_qos(trace_of(60.0, serve), bursts);
    EXPECT_NEAR(r.underrun_time_s, expected, 1e-12);
    EXPECT_EQ(r.underrun_events, 5);
}

TEST(ComputeQos, RejectsUnknownBurst)
{
    EXPECT_THROW(qos::compute_qos(trace_of(12.0, {{3, 0.0, 1.0}}), {burst(0, 0.0, 6.0, 1)}), qos::InconsistentTrace);
    EXPECT_THROW(qos::compute_qos(trace_of(12.0, {}), {}, 0.0), std::invalid_argument);
}

TEST(ComputeQos, Pure)
{
    std::vector<sim::Delivery> d{{0.5, 1, 0, 125'000}, {3.5, 1, 0, 375'000}};
    const auto t = trace_of(6.0, {{0, 0.0, 3.5}}, d);
    const std::vector<traffic::Burst> b{burst(0, 0.0, 2.0, 500'000)};
    EXPECT_EQ(qos::to_json(qos::compute_qos(t, b)), qos::to_json(qos::compute_qos(t, b)));
}

TEST(QosPass, Examples)
{
    qos::QosReport r;
    r.avg_throughput_mbps = 16.0;
    r.underrun_events = 3;
    EXPECT_TRUE(qos::qos_pass(r, 15.6, 3));
    r.avg_throughput_mbps = 15.0;
    r.underrun_events = 5;
    EXPECT_FALSE(qos::qos_pass(r, 15.6, 3));
    r.avg_throughput_mbps = 15.6;
    r.underrun_events = 0;
    EXPECT_TRUE(qos::qos_pass(r, 15.6, 3));
    r.underrun_events = 4;
    EXPECT_FALSE(qos::qos_pass(r, 15.6, 3));
}

TEST(QosOutput, JsonAndCsv)
{
    std::vector<sim::Delivery> d{{0.5, 1, 0, 125'000}};
    const auto r = qos::compute_qos(trace_of(2.0, {}, d), {});
    const auto j = qos::to_json(r);
    EXPECT_DOUBLE_EQ(j.at("avg_throughput_mbps").get<double>(), 0.5);
    EXPECT_EQ(j.at("underrun_events"), 0);
    std::ostringstream o;
    qos::write_instantaneous_csv(o, r);
    EXPECT_EQ(o.str(), "t_s,mbps\n0,1\n1,0\n");
}
