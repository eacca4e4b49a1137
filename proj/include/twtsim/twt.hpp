#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

namespace twtsim::twt {

/// Largest service period the TWT implementation accepts, in microseconds.
inline constexpr std::int64_t kMaxServicePeriodUs = 65535;

/// Individual, implicit, unannounced TWT agreement. The client is awake for
/// sp_us, then sleeps for wi_us, repeating from offset_us.
struct TwtSchedule
{
    std::int64_t sp_us = kMaxServicePeriodUs;
    std::int64_t wi_us = 0;
    std::int64_t offset_us = 0;
    int mf = 1;

    std::int64_t period_us() const { return sp_us + wi_us; }

    /// Throws std::invalid_argument on a violated invariant.
    void validate() const;

    bool operator==(const TwtSchedule&) const = default;
};

bool is_power_of_two(int v);

/// Awake percentage, 100 * sp / (sp + wi).
double duty_cycle(const TwtSchedule& s);

/// Schedule for a duty cycle at MF 1 (sp pinned to the cap), then both
/// sp and wi floor-divided by mf.
TwtSchedule schedule_from(double duty_percent, int mf, std::int64_t offset_us = 0);

struct WakeWindow
{
    std::int64_t start_us = 0;
    std::int64_t end_us = 0;

    bool operator==(const WakeWindow&) const = default;
};

/// Wake windows intersected with [0, horizon_us); empty windows are dropped.
std::vector<WakeWindow> wake_windows(const TwtSchedule& s, std::int64_t horizon_us);

// Nanosecond queries used by the event loop.

/// Time left in the window containing t_ns, or 0 while asleep. Effectively
/// unbounded when the schedule never sleeps.
std::int64_t window_remaining_ns(const TwtSchedule& s, std::int64_t t_ns);

/// Start of the window containing t_ns, or of the next one.
std::int64_t next_wake_ns(const TwtSchedule& s, std::int64_t t_ns);

nlohmann::json to_json(const TwtSchedule& s);
TwtSchedule schedule_from_json(const nlohmann::json& j);

}  // namespace twtsim::twt
