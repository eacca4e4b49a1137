#include "twtsim/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twtsim::transport {

void TransportParams::validate() const
{
    if (!(remote_rtt_s > 0.0) || !(local_rtt_s > 0.0))
        throw std::invalid_argument("transport: base RTTs must be positive");
    if (queue_limit_segments <= 0)
        throw std::invalid_argument("transport: queue_limit_segments must be positive");
    if (!(initial_cwnd_segments >= 1.0))
        throw std::invalid_argument("transport: initial cwnd must be at least one segment");
    if (!(initial_ssthresh_segments >= 2.0))
        throw std::invalid_argument("transport: initial ssthresh must be at least two segments");
    if (!(idle_restart_s >= 0.0))
        throw std::invalid_argument("transport: idle_restart_s must be non-negative");
}

Flow make_flow(int id, FlowSource src, int dst, FlowKind kind, std::int64_t segment_bytes,
               const TransportParams& params)
{
    Flow f;
    f.id = id;
    f.src = src;
    f.dst = dst;
    f.kind = kind;
    f.cwnd_segments = params.initial_cwnd_segments;
    f.ssthresh_segments = params.initial_ssthresh_segments;
    f.base_rtt_s = src == FlowSource::remote_server ? params.remote_rtt_s : params.local_rtt_s;
    f.segment_bytes = segment_bytes;
    f.queue_limit_segments = params.queue_limit_segments;
    return f;
}

Flow on_ack(Flow flow, int acked_segments)
{
    for (int i = 0; i < acked_segments; ++i)
    {
        if (flow.cwnd_segments < flow.ssthresh_segments)
            flow.cwnd_segments += 1.0;
        else
            flow.cwnd_segments += 1.0 / flow.cwnd_segments;
    }
    return flow;
}

Flow on_loss(Flow flow)
{
    flow.ssthresh_segments = std::max(flow.cwnd_segments / 2.0, 2.0);
    flow.cwnd_segments = flow.ssthresh_segments;
    return flow;
}

Flow on_drop(Flow flow, std::int64_t seq)
{
    if (seq < flow.recovery_seq)
        return flow;
    flow = on_loss(flow);
    flow.recovery_seq = flow.next_seq;
    return flow;
}

Flow on_idle_restart(Flow flow, double idle_s, const TransportParams& params)
{
    if (params.idle_restart_s > 0.0 && flow.bytes_in_flight == 0 && idle_s >= params.idle_restart_s)
        flow.cwnd_segments = std::min(flow.cwnd_segments, params.initial_cwnd_segments);
    return flow;
}

std::int64_t offer_load(const Flow& flow)
{
    const std::int64_t pending = flow.kind == FlowKind::saturated ? kUnlimitedBytes : flow.unsent_bytes;
    const auto window = static_cast<std::int64_t>(std::floor(flow.cwnd_segments)) * flow.segment_bytes;
    const std::int64_t headroom = std::max<std::int64_t>(window - flow.bytes_in_flight, 0);
    const std::int64_t cap = static_cast<std::int64_t>(flow.queue_limit_segments) * flow.segment_bytes;
    return std::min({pending, headroom, cap});
}

}  // namespace twtsim::transport
