#include "twtsim/qos.hpp"

#include <cmath>
#include <ostream>
#include <unordered_map>

#include "twtsim/format.hpp"

namespace twtsim::qos {

QosReport compute_qos(const sim::SimTrace& trace, const std::vector<traffic::Burst>& bursts, double interval_s)
{
    if (!(interval_s > 0.0))
        throw std::invalid_argument("qos: interval must be positive");

    QosReport r;
    r.interval_s = interval_s;
    r.duration_s = trace.duration_s;
    const auto bins = static_cast<std::size_t>(std::ceil(trace.duration_s / interval_s));
    std::vector<std::int64_t> bin_bytes(bins, 0);
    for (const auto& d : trace.deliveries)
    {
        if (d.station != trace.dut_station || d.time_s >= trace.duration_s)
            continue;
        auto i = static_cast<std::size_t>(d.time_s / interval_s);
        bin_bytes[std::min(i, bins - 1)] += d.bytes;
        r.total_bytes += d.bytes;
    }
    r.avg_throughput_mbps = static_cast<double>(r.total_bytes) * 8.0 / trace.duration_s / 1e6;

    r.instantaneous_mbps.reserve(bins);
    double sum = 0.0;
    for (auto b : bin_bytes)
    {
        double mbps = static_cast<double>(b) * 8.0 / interval_s / 1e6;
        r.instantaneous_mbps.push_back(mbps);
        sum += mbps;
    }
    if (bins > 0)
    {
        const double mean = sum / static_cast<double>(bins);
        double ss = 0.0;
        for (double v : r.instantaneous_mbps)
            ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(bins));
        r.throughput_variation = mean > 0.0 ? sd / mean : 0.0;
    }

    std::unordered_map<int, std::size_t> by_index;
    for (std::size_t i = 0; i < bursts.size(); ++i)
        by_index.emplace(bursts[i].index, i);
    std::vector<double> serve_end(bursts.size(), -1.0);
    for (const auto& s : trace.dut_burst_serve)
    {
        auto it = by_index.find(s.burst_index);
        if (it == by_index.end())
            throw InconsistentTrace("qos: trace serves burst " + std::to_string(s.burst_index) +
                                    " which is not in the burst list");
        serve_end[it->second] = s.serve_end_s;
    }
    for (std::size_t i = 0; i < bursts.size(); ++i)
    {
        const double deadline = bursts[i].release_time_s + bursts[i].inter_burst_time_s;
        const double end = serve_end[i] >= 0.0 ? serve_end[i] : trace.end_s;
        if (end > deadline)
        {
            ++r.underrun_events;
            r.underrun_time_s += end - deadline;
        }
    }
    return r;
}

bool qos_pass(const QosReport& report, double bitrate_mbps, int max_underruns)
{
    return report.avg_throughput_mbps >= bitrate_mbps && report.underrun_events <= max_underruns;
}

nlohmann::json to_json(const QosReport& r)
{
    return {{"avg_throughput_mbps", r.avg_throughput_mbps},
            {"interval_s", r.interval_s},
            {"underrun_events", r.underrun_events},
            {"underrun_time_s", r.underrun_time_s},
            {"throughput_variation", r.throughput_variation},
            {"total_bytes", r.total_bytes},
            {"duration_s", r.duration_s},
            {"instantaneous_mbps", r.instantaneous_mbps}};
}

void write_instantaneous_csv(std::ostream& out, const QosReport& r)
{
    out << "t_s,mbps\n";
    for (std::size_t i = 0; i < r.instantaneous_mbps.size(); ++i)
        out << fmt_real(static_cast<double>(i) * r.interval_s) << ',' << fmt_real(r.instantaneous_mbps[i]) << '\n';
}

}  // namespace twtsim::qos
