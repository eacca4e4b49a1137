#include "twtsim/twt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace twtsim::twt {

namespace {

constexpr std::int64_t kNsPerUs = 1000;
constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max() / 4;

}  // namespace

bool is_power_of_two(int v)
{
    return v > 0 && (v & (v - 1)) == 0;
}

void TwtSchedule::validate() const
{
    if (sp_us <= 0 || sp_us > kMaxServicePeriodUs)
        throw std::invalid_argument("twt: service period must be in (0, 65535] us");
    if (wi_us < 0)
        throw std::invalid_argument("twt: wake interval must be non-negative");
    if (offset_us < 0)
        throw std::invalid_argument("twt: offset must be non-negative");
    if (!is_power_of_two(mf))
        throw std::invalid_argument("twt: multiplication factor must be a power of two");
}

double duty_cycle(const TwtSchedule& s)
{
    return 100.0 * static_cast<double>(s.sp_us) / static_cast<double>(s.sp_us + s.wi_us);
}

TwtSchedule schedule_from(double duty_percent, int mf, std::int64_t offset_us)
{
    if (!(duty_percent > 0.0 && duty_percent <= 100.0))
        throw std::invalid_argument("twt: duty cycle must be in (0, 100]");
    if (!is_power_of_two(mf))
        throw std::invalid_argument("twt: multiplication factor must be a power of two");
    if (mf > kMaxServicePeriodUs)
        throw std::invalid_argument("twt: multiplication factor leaves an empty service period");

    const std::int64_t sp1 = kMaxServicePeriodUs;
    const auto wi1 = static_cast<std::int64_t>(
        std::llround(static_cast<double>(sp1) * (100.0 - duty_percent) / duty_percent));

    TwtSchedule s{sp1 / mf, wi1 / mf, offset_us, mf};
    s.validate();
    return s;
}

std::vector<WakeWindow> wake_windows(const TwtSchedule& s, std::int64_t horizon_us)
{
    std::vector<WakeWindow> out;
    if (horizon_us <= s.offset_us)
        return out;
    if (s.wi_us == 0)
    {
        out.push_back({s.offset_us, horizon_us});
        return out;
    }
    for (std::int64_t start = s.offset_us; start < horizon_us; start += s.period_us())
        out.push_back({start, std::min(start + s.sp_us, horizon_us)});
    return out;
}

std::int64_t window_remaining_ns(const TwtSchedule& s, std::int64_t t_ns)
{
    const std::int64_t offset = s.offset_us * kNsPerUs;
    if (t_ns < offset)
        return 0;
    if (s.wi_us == 0)
        return kUnbounded;
    const std::int64_t period = s.period_us() * kNsPerUs;
    const std::int64_t phase = (t_ns - offset) % period;
    const std::int64_t sp = s.sp_us * kNsPerUs;
    return phase < sp ? sp - phase : 0;
}

std::int64_t next_wake_ns(const TwtSchedule& s, std::int64_t t_ns)
{
    const std::int64_t offset = s.offset_us * kNsPerUs;
    if (t_ns < offset)
        return offset;
    if (s.wi_us == 0)
        return t_ns;
    const std::int64_t period = s.period_us() * kNsPerUs;
    const std::int64_t phase = (t_ns - offset) % period;
    const std::int64_t cycle_start = t_ns - phase;
    return phase < s.sp_us * kNsPerUs ? cycle_start : cycle_start + period;
}

nlohmann::json to_json(const TwtSchedule& s)
{
    return {{"sp_us", s.sp_us}, {"wi_us", s.wi_us}, {"offset_us", s.offset_us}, {"mf", s.mf},
            {"duty_pct", duty_cycle(s)}};
}

TwtSchedule schedule_from_json(const nlohmann::json& j)
{
    TwtSchedule s{j.at("sp_us").get<std::int64_t>(), j.at("wi_us").get<std::int64_t>(),
                  j.value("offset_us", std::int64_t{0}), j.value("mf", 1)};
    s.validate();
    return s;
}

}  // namespace twtsim::twt
