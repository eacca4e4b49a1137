#include <gtest/gtest.h>

#include "twtsim/twt.hpp"

using namespace twtsim::twt;

TEST(DutyCycle, Examples)
{
    EXPECT_DOUBLE_EQ(duty_cycle({65535, 152915, 0, 1}), 30.0);
    EXPECT_DOUBLE_EQ(duty_cycle({65535, 0, 0, 1}), 100.0);
    EXPECT_DOUBLE_EQ(duty_cycle({8191, 19114, 0, 8}), 100.0 * 8191.0 / 27305.0);
    EXPECT_NEAR(duty_cycle({8191, 19114, 0, 8}), 29.998, 1e-3);
}

TEST(ScheduleFrom, Examples)
{
    EXPECT_EQ(schedule_from(30, 1), (TwtSchedule{65535, 152915, 0, 1}));
    EXPECT_EQ(schedule_from(30, 8), (TwtSchedule{8191, 19114, 0, 8}));
    for (int mf : {1, 2, 4, 8, 16, 64})
        EXPECT_EQ(schedule_from(100, mf).wi_us, 0);
    EXPECT_EQ(schedule_from(30, 2, 500).offset_us, 500);
}

TEST(ScheduleFrom, RoundTripWithinHalfPoint)
{
    for (int d = 5; d <= 95; d += 5)
        for (int mf : {1, 2, 4, 8, 16})
        {
            const auto s = schedule_from(d, mf);
            EXPECT_LE(std::abs(duty_cycle(s) - d), 0.5) << d << "% mf " << mf;
            EXPECT_EQ(s.mf, mf);
        }
}

TEST(ScheduleFrom, ServicePeriodNeverExceedsCap)
{
    for (double d = 0.5; d <= 100.0; d += 0.5)
        for (int mf = 1; mf <= 1024; mf *= 2)
        {
            const auto s = schedule_from(d, mf);
            ASSERT_LE(s.sp_us, kMaxServicePeriodUs);
            ASSERT_GT(s.sp_us, 0);
            ASSERT_GE(s.wi_us, 0);
        }
}

TEST(ScheduleFrom, RejectsInvalidInput)
{
    EXPECT_THROW(schedule_from(0, 1), std::invalid_argument);
    EXPECT_THROW(schedule_from(-5, 1), std::invalid_argument);
    EXPECT_THROW(schedule_from(100.5, 1), std::invalid_argument);
    EXPECT_THROW(schedule_from(30, 3), std::invalid_argument);
    EXPECT_THROW(schedule_from(30, 0), std::invalid_argument);
}

TEST(Schedule, ValidateRejectsOutOfRange)
{
    EXPECT_THROW((TwtSchedule{0, 10, 0, 1}).validate(), std::invalid_argument);
    EXPECT_THROW((TwtSchedule{65536, 10, 0, 1}).validate(), std::invalid_argument);
    EXPECT_THROW((TwtSchedule{100, -1, 0, 1}).validate(), std::invalid_argument);
    EXPECT_THROW((TwtSchedule{100, 10, -1, 1}).validate(), std::invalid_argument);
    EXPECT_THROW((TwtSchedule{100, 10, 0, 6}).validate(), std::invalid_argument);
    EXPECT_NO_THROW((TwtSchedule{100, 10, 0, 4}).validate());
}

TEST(WakeWindows, EnumeratesPeriods)
{
    const TwtSchedule s{8191, 19114, 0, 8};
    // The third window would open exactly at 54610, so the half-open horizon excludes it.
    auto w = wake_windows(s, 54610);
    ASSERT_EQ(w.size(), 2u);
    EXPECT_EQ(w[0].start_us, 0);
    EXPECT_EQ(w[0].end_us, 8191);
    EXPECT_EQ(w[1].start_us, 27305);
    EXPECT_EQ(w[1].end_us, 35496);

    w = wake_windows(s, 54700);
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w[2].start_us, 54610);
    EXPECT_EQ(w[2].end_us, 54700);
}

TEST(WakeWindows, AlwaysAwakeAndDegenerateHorizon)
{
    const auto w = wake_windows({65535, 0, 100, 1}, 1'000'000);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0].start_us, 100);
    EXPECT_EQ(w[0].end_us, 1'000'000);
    EXPECT_TRUE(wake_windows({100, 200, 500, 1}, 500).empty());
    EXPECT_TRUE(wake_windows({100, 200, 500, 1}, 10).empty());
}

TEST(WakeWindows, SortedDisjointAndCoverDuty)
{
    const std::int64_t horizon = 10'000'000;
    for (int d = 5; d <= 100; d += 5)
        for (int mf : {1, 2, 8, 32})
        {
            const auto s = schedule_from(d, mf, 1234);
            const auto w = wake_windows(s, horizon);
            std::int64_t total = 0;
            for (std::size_t i = 0; i < w.size(); ++i)
            {
                ASSERT_LT(w[i].start_us, w[i].end_us);
                ASSERT_LE(w[i].end_us, horizon);
                if (i > 0)
                    ASSERT_LT(w[i - 1].end_us, w[i].start_us + (s.wi_us == 0 ? 1 : 0));
                total += w[i].end_us - w[i].start_us;
            }
            const double expected = duty_cycle(s) / 100.0 * static_cast<double>(horizon);
            EXPECT_LE(std::abs(static_cast<double>(total) - expected), static_cast<double>(s.period_us()))
                << d << "% mf " << mf;
        }
}

TEST(WindowRemaining, InsideAndOutside)
{
    const TwtSchedule s{8191, 19114, 0, 8};
    EXPECT_EQ(window_remaining_ns(s, 0), 8'191'000);
    EXPECT_EQ(window_remaining_ns(s, 8'190'000), 1'000);
    EXPECT_EQ(window_remaining_ns(s, 8'191'000), 0);
    EXPECT_EQ(window_remaining_ns(s, 20'000'000), 0);
    EXPECT_EQ(next_wake_ns(s, 8'191'000), 27'305'000);
    EXPECT_EQ(next_wake_ns(s, 1'000), 0);
    EXPECT_EQ(next_wake_ns(s, 30'000'000), 27'305'000);
    EXPECT_GT(window_remaining_ns({100, 0, 0, 1}, 123'456'789), 1'000'000'000'000);
}

TEST(ScheduleJson, RoundTrip)
{
    const auto s = schedule_from(30, 8, 77);
    const auto j = to_json(s);
    EXPECT_EQ(j.at("sp_us"), 8191);
    EXPECT_EQ(j.at("wi_us"), 19114);
    EXPECT_EQ(j.at("offset_us"), 77);
    EXPECT_EQ(j.at("mf"), 8);
    EXPECT_NEAR(j.at("duty_pct").get<double>(), 29.998, 1e-3);
    EXPECT_EQ(schedule_from_json(j), s);
}
