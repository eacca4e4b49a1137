#pragma once

#include <cstdint>

#include "twtsim/rng.hpp"

namespace twtsim::mac {

/// Channel access and aggregation constants for a single 20 MHz BSS.
/// per_frame_overhead_us covers preamble plus the block-ack exchange.
struct MacParams
{
    std::int64_t slot_us = 9;
    std::int64_t sifs_us = 16;
    std::int64_t difs_us = 34;
    int cw_min = 15;
    int cw_max = 1023;
    int max_ampdu_mpdus = 64;
    std::int64_t mpdu_payload_bytes = 1500;
    std::int64_t txop_limit_us = 5484;
    std::int64_t per_frame_overhead_us = 100;
    std::int64_t ack_frame_bytes = 64;  // uplink transport ACK MPDU

    void validate() const;

    /// Highest backoff stage before the window saturates at cw_max.
    int max_backoff_stage() const;
};

/// Uniform slot count in [0, min(cw_max, (cw_min + 1) * 2^stage - 1)].
int backoff_draw(int stage, const MacParams& mac, Rng& rng);

/// Payload airtime of `bytes` at `phy_rate_mbps`, in microseconds.
double payload_airtime_us(std::int64_t bytes, double phy_rate_mbps);

/// Largest A-MPDU (in full-size MPDUs) whose whole exchange fits in both the
/// TXOP limit and the remaining wake window. Zero when nothing fits.
int aggregate(std::int64_t queue_bytes, double phy_rate_mbps, std::int64_t window_remaining_us,
              const MacParams& mac);

/// Closed-form goodput of one always-backlogged contender: full TXOP-limited
/// A-MPDUs separated by DIFS and a mean stage-0 backoff.
double saturated_throughput_mbps(double phy_rate_mbps, const MacParams& mac);

/// Nominal PHY rate whose saturated_throughput_mbps equals the target.
double phy_rate_for_throughput(double target_mbps, const MacParams& mac);

}  // namespace twtsim::mac
