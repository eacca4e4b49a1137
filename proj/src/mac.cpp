#include "twtsim/mac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twtsim::mac {

namespace {

bool is_pow2_minus_one(int v)
{
    return v > 0 && ((v + 1) & v) == 0;
}

}  // namespace

void MacParams::validate() const
{
    if (slot_us <= 0 || sifs_us <= 0 || difs_us <= 0 || txop_limit_us <= 0 || per_frame_overhead_us <= 0)
        throw std::invalid_argument("mac: all durations must be positive");
    if (!is_pow2_minus_one(cw_min) || !is_pow2_minus_one(cw_max) || cw_min >= cw_max)
        throw std::invalid_argument("mac: cw_min < cw_max, both of the form 2^k - 1");
    if (max_ampdu_mpdus <= 0)
        throw std::invalid_argument("mac: max_ampdu_mpdus must be positive");
    if (mpdu_payload_bytes <= 0 || ack_frame_bytes <= 0)
        throw std::invalid_argument("mac: frame sizes must be positive");
}

int MacParams::max_backoff_stage() const
{
    int stage = 0;
    while (((cw_min + 1) << stage) - 1 < cw_max)
        ++stage;
    return stage;
}

int backoff_draw(int stage, const MacParams& mac, Rng& rng)
{
    stage = std::clamp(stage, 0, mac.max_backoff_stage());
    const int cw = std::min(mac.cw_max, ((mac.cw_min + 1) << stage) - 1);
    return static_cast<int>(rng.uniform_int(0, cw));
}

double payload_airtime_us(std::int64_t bytes, double phy_rate_mbps)
{
    return static_cast<double>(bytes) * 8.0 / phy_rate_mbps;
}

int aggregate(std::int64_t queue_bytes, double phy_rate_mbps, std::int64_t window_remaining_us,
              const MacParams& mac)
{
    if (queue_bytes <= 0)
        return 0;
    const std::int64_t limit = std::min(mac.txop_limit_us, window_remaining_us);
    if (limit < mac.per_frame_overhead_us)
        return 0;
    const double per_mpdu = payload_airtime_us(mac.mpdu_payload_bytes, phy_rate_mbps);
    const auto fit = static_cast<std::int64_t>(
        std::floor(static_cast<double>(limit - mac.per_frame_overhead_us) / per_mpdu));
    const std::int64_t queued = (queue_bytes + mac.mpdu_payload_bytes - 1) / mac.mpdu_payload_bytes;
    return static_cast<int>(std::min({fit, queued, static_cast<std::int64_t>(mac.max_ampdu_mpdus)}));
}

double saturated_throughput_mbps(double phy_rate_mbps, const MacParams& mac)
{
    const int n = aggregate(static_cast<std::int64_t>(mac.max_ampdu_mpdus) * mac.mpdu_payload_bytes,
                            phy_rate_mbps, mac.txop_limit_us, mac);
    if (n == 0)
        return 0.0;
    const double payload = n * payload_airtime_us(mac.mpdu_payload_bytes, phy_rate_mbps);
    const double mean_backoff = 0.5 * mac.cw_min * static_cast<double>(mac.slot_us);
    const double cycle = static_cast<double>(mac.difs_us) + mean_backoff +
                         static_cast<double>(mac.per_frame_overhead_us) + payload;
    return static_cast<double>(n * mac.mpdu_payload_bytes) * 8.0 / cycle;
}

double phy_rate_for_throughput(double target_mbps, const MacParams& mac)
{
    if (!(target_mbps > 0.0))
        throw std::invalid_argument("mac: target throughput must be positive");
    double lo = target_mbps;
    double hi = target_mbps * 4.0;
    while (saturated_throughput_mbps(hi, mac) < target_mbps)
        hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i)
    {
        double mid = 0.5 * (lo + hi);
        if (saturated_throughput_mbps(mid, mac) < target_mbps)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace twtsim::mac
