#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "twtsim/rng.hpp"

namespace twtsim::traffic {

/// Synthetic streaming source parameters. Frame sizes are Weibull(k, lambda)
/// in bytes; inter-burst times are a normal truncated to [ibt_min, ibt_max].
struct VideoParams
{
    double bitrate_mbps = 15.6;
    int frame_rate = 30;
    double weibull_shape_k = 0.8099;
    double weibull_scale_lambda = 6950.0 * 15.6 / 2.0;
    double ibt_mean_s = 6.0;
    double ibt_variance_s2 = 1.8;
    double ibt_min_s = 2.0;
    double ibt_max_s = 10.0;

    /// Default model for a given nominal bitrate; lambda scales with it.
    static VideoParams for_bitrate(double bitrate_mbps);

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    double ibt_stddev_s() const;
};

struct Burst
{
    int index = 0;
    double release_time_s = 0.0;
    std::int64_t size_bytes = 0;
    double inter_burst_time_s = 0.0;
    std::vector<std::int64_t> frame_sizes_bytes;  // empty for CBR
};

/// Weibull quantile rounded to whole bytes and clamped at 1; `u` in [0, 1).
std::int64_t frame_size_from_uniform(const VideoParams& params, double u);

std::int64_t sample_frame_size(const VideoParams& params, Rng& rng);

/// Rejection sampling on the untruncated normal; zero variance returns the mean.
double sample_inter_burst_time(const VideoParams& params, Rng& rng);

/// Fixed-size bursts every ibt_mean_s seconds over [0, session_duration_s).
std::vector<Burst> generate_cbr_bursts(const VideoParams& params, double session_duration_s);

std::vector<Burst> generate_vbr_bursts(const VideoParams& params, double session_duration_s, Rng& rng);

/// Client-side DASH estimate in Mbit/s. Throws std::domain_error when
/// serve_time_s is not positive.
double available_bandwidth(std::int64_t last_burst_bytes, double serve_time_s);

/// `index,release_time_s,size_bytes,inter_burst_time_s`
void write_bursts_csv(std::ostream& out, const std::vector<Burst>& bursts);

}  // namespace twtsim::traffic
