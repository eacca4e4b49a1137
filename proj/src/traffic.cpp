#include "twtsim/traffic.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "twtsim/format.hpp"

namespace twtsim::traffic {

VideoParams VideoParams::for_bitrate(double bitrate_mbps)
{
    VideoParams p;
    p.bitrate_mbps = bitrate_mbps;
    p.weibull_scale_lambda = 6950.0 * bitrate_mbps / 2.0;
    return p;
}

void VideoParams::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("video params: " + what); };
    if (!(bitrate_mbps >= 0.0))
        fail("bitrate_mbps must be non-negative");
    if (frame_rate <= 0)
        fail("frame_rate must be positive");
    if (!(weibull_shape_k > 0.0))
        fail("weibull_shape_k must be positive");
    if (!(weibull_scale_lambda > 0.0))
        fail("weibull_scale_lambda must be positive");
    if (!(ibt_variance_s2 >= 0.0))
        fail("ibt_variance_s2 must be non-negative");
    if (!(ibt_min_s < ibt_mean_s && ibt_mean_s < ibt_max_s))
        fail("inter-burst time must satisfy min < mean < max");
    if (!(ibt_min_s > 0.0))
        fail("ibt_min_s must be positive");
}

double VideoParams::ibt_stddev_s() const
{
    return std::sqrt(ibt_variance_s2);
}

std::int64_t frame_size_from_uniform(const VideoParams& params, double u)
{
    double x = params.weibull_scale_lambda * std::pow(-std::log1p(-u), 1.0 / params.weibull_shape_k);
    auto bytes = static_cast<std::int64_t>(std::llround(x));
    return bytes < 1 ? 1 : bytes;
}

std::int64_t sample_frame_size(const VideoParams& params, Rng& rng)
{
    return frame_size_from_uniform(params, rng.uniform());
}

double sample_inter_burst_time(const VideoParams& params, Rng& rng)
{
    if (params.ibt_variance_s2 == 0.0)
        return params.ibt_mean_s;
    const double sigma = params.ibt_stddev_s();
    for (;;)
    {
        double x = params.ibt_mean_s + sigma * rng.standard_normal();
        if (x >= params.ibt_min_s && x <= params.ibt_max_s)
            return x;
    }
}

std::vector<Burst> generate_cbr_bursts(const VideoParams& params, double session_duration_s)
{
    if (!(session_duration_s > 0.0))
        throw std::invalid_argument("session duration must be positive");
    std::vector<Burst> bursts;
    if (params.bitrate_mbps <= 0.0)
        return bursts;
    params.validate();

    const double ibt = params.ibt_mean_s;
    const auto size = static_cast<std::int64_t>(std::llround(params.bitrate_mbps * 1e6 * ibt / 8.0));
    for (int i = 0;; ++i)
    {
        double t = i * ibt;
        if (t >= session_duration_s)
            break;
        bursts.push_back(Burst{i, t, size, ibt, {}});
    }
    return bursts;
}

std::vector<Burst> generate_vbr_bursts(const VideoParams& params, double session_duration_s, Rng& rng)
{
    if (!(session_duration_s > 0.0))
        throw std::invalid_argument("session duration must be positive");
    std::vector<Burst> bursts;
    if (params.bitrate_mbps <= 0.0)
        return bursts;
    params.validate();

    double t = 0.0;
    for (int i = 0; t < session_duration_s; ++i)
    {
        Burst b;
        b.index = i;
        b.release_time_s = t;
        b.inter_burst_time_s = sample_inter_burst_time(params, rng);
        auto frames = static_cast<int>(std::lround(b.inter_burst_time_s * params.frame_rate));
        frames = std::max(frames, 1);
        b.frame_sizes_bytes.reserve(static_cast<std::size_t>(frames));
        for (int f = 0; f < frames; ++f)
        {
            auto sz = sample_frame_size(params, rng);
            b.frame_sizes_bytes.push_back(sz);
            b.size_bytes += sz;
        }
        t += b.inter_burst_time_s;
        bursts.push_back(std::move(b));
    }
    return bursts;
}

double available_bandwidth(std::int64_t last_burst_bytes, double serve_time_s)
{
    if (!(serve_time_s > 0.0))
        throw std::domain_error("malformed trace: burst serve time must be positive");
    return 8.0 * static_cast<double>(last_burst_bytes) / serve_time_s / 1e6;
}

void write_bursts_csv(std::ostream& out, const std::vector<Burst>& bursts)
{
    out << "index,release_time_s,size_bytes,inter_burst_time_s\n";
    for (const auto& b : bursts)
        out << b.index << ',' << fmt_real(b.release_time_s) << ',' << b.size_bytes << ','
            << fmt_real(b.inter_burst_time_s) << '\n';
}

}  // namespace twtsim::traffic
