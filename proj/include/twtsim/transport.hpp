#pragma once

#include <cstdint>
#include <limits>

namespace twtsim::transport {

enum class FlowSource
{
    local_ap,
    remote_server
};

enum class FlowKind
{
    saturated,
    burst_driven
};

struct TransportParams
{
    double remote_rtt_s = 0.030;
    double local_rtt_s = 0.002;
    int queue_limit_segments = 256;
    double initial_cwnd_segments = 10.0;
    double initial_ssthresh_segments = 1.0e9;
    /// Collapse cwnd back to the initial window when a flow restarts after
    /// being idle at least this long (0 disables).
    double idle_restart_s = 0.2;

    void validate() const;
};

/// Sender-side state of one ACK-clocked TCP-like flow. Window quantities are
/// in segments; byte counters in bytes.
struct Flow
{
    int id = 0;
    FlowSource src = FlowSource::local_ap;
    int dst = 0;
    FlowKind kind = FlowKind::saturated;
    double cwnd_segments = 10.0;
    double ssthresh_segments = 1.0e9;
    double base_rtt_s = 0.002;
    std::int64_t segment_bytes = 1500;
    int queue_limit_segments = 256;

    std::int64_t bytes_in_flight = 0;
    std::int64_t unsent_bytes = 0;  // burst-driven only
    std::int64_t next_seq = 0;      // transmissions issued so far
    std::int64_t recovery_seq = 0;  // drops below this belong to the current loss epoch
};

Flow make_flow(int id, FlowSource src, int dst, FlowKind kind, std::int64_t segment_bytes,
               const TransportParams& params);

/// Slow start below ssthresh, congestion avoidance above; each acknowledged
/// segment is applied individually.
[[nodiscard]] Flow on_ack(Flow flow, int acked_segments);

/// Multiplicative decrease: ssthresh = max(cwnd / 2, 2), cwnd = ssthresh.
[[nodiscard]] Flow on_loss(Flow flow);

/// A queue drop of transmission `seq`. Only the first drop in a window of
/// data triggers on_loss; later drops from the same window are absorbed.
[[nodiscard]] Flow on_drop(Flow flow, std::int64_t seq);

/// Restart-after-idle: an empty pipe idle for idle_s or longer falls back to
/// the initial window.
[[nodiscard]] Flow on_idle_restart(Flow flow, double idle_s, const TransportParams& params);

/// Bytes the sender may hand to the network now.
std::int64_t offer_load(const Flow& flow);

inline constexpr std::int64_t kUnlimitedBytes = std::numeric_limits<std::int64_t>::max() / 4;

}  // namespace twtsim::transport
