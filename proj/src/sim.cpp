#include "twtsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>

#include "twtsim/format.hpp"

namespace twtsim::sim {

namespace {

using Time = std::int64_t;  // nanoseconds

constexpr Time kNsPerUs = 1000;
constexpr Time kNever = std::numeric_limits<Time>::max();
constexpr std::uint64_t kMacStream = 2;

Time to_ns(double s)
{
    return static_cast<Time>(std::llround(s * 1e9));
}

double to_s(Time t)
{
    return static_cast<double>(t) / 1e9;
}

Time airtime_ns(std::int64_t bytes, double phy_rate_mbps)
{
    // bits / (Mbit/s) is microseconds
    return static_cast<Time>(std::ceil(static_cast<double>(bytes) * 8.0 * 1000.0 / phy_rate_mbps));
}

struct Segment
{
    int flow = 0;
    int burst = -1;
    std::int64_t seq = 0;
    std::int64_t bytes = 0;
};

struct Chunk
{
    int burst = -1;
    std::int64_t bytes = 0;
    bool retransmit = false;
};

struct InTransit
{
    Time arrive = 0;
    Segment seg;
};

struct AckRecord
{
    int flow = 0;
    int segments = 0;
    std::int64_t bytes = 0;
};

struct FlowState
{
    transport::Flow flow;
    FlowInfo info;
    std::deque<Chunk> unsent;
    std::deque<InTransit> transit;
    Time fwd_delay = 0;
    Time back_delay = 0;
    Time last_activity = 0;
    Time last_cwnd_sample = -1;
    int ap_queued = 0;
};

struct Node
{
    int backoff = -1;  // slots left; -1 until drawn
    int stage = 0;
    Time active_since = -1;  // -1 when not contending
    std::vector<AckRecord> acks;
};

enum class EventType
{
    flow_arrival,
    ack_arrival,
    burst_release,
    access,
    tx_end,
    wake_edge,
    session_end,
    drain_end
};

struct Event
{
    Time time = 0;
    std::uint64_t order = 0;
    EventType type = EventType::access;
    int a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;
};

struct EventLater
{
    bool operator()(const Event& x, const Event& y) const
    {
        return x.time != y.time ? x.time > y.time : x.order > y.order;
    }
};

enum class TxKind
{
    downlink,
    uplink
};

struct TxPlan
{
    TxKind kind = TxKind::downlink;
    int node = 0;
    int station = 0;  // client on the link
    int count = 0;    // segments (downlink) or ACK records (uplink)
    Time duration = 0;
    bool round_robin_pick = false;
};

struct BurstState
{
    std::int64_t remaining = 0;
    Time serve_start = -1;
    bool done = false;
};

class Simulator
{
  public:
    explicit Simulator(const Scenario& sc) : sc_(sc), rng_(derive_seed(sc.seed, kMacStream)) {}

    SimTrace run();

  private:
    void push(Time t, EventType type, int a = 0, std::int64_t b = 0, std::int64_t c = 0)
    {
        events_.push(Event{t, next_order_++, type, a, b, c});
    }

    bool gated(int station) const
    {
        const auto& tw = sc_.stations[static_cast<std::size_t>(station)].twt;
        return tw && tw->wi_us > 0;
    }

    /// Usable window in whole microseconds, minus a 1 ns guard so an exchange
    /// always ends strictly before the window does.
    std::int64_t window_us(int station, Time now) const;

    void try_send(int f, Time now);
    void on_flow_arrival(int f, Time now);
    void on_ack_arrival(int f, int segments, std::int64_t bytes, Time now);
    void on_burst_release(int b, Time now);
    void on_wake_edge(bool start, Time now);
    void on_tx_end(Time now);
    void on_access(std::uint64_t gen, Time now);

    std::optional<TxPlan> plan_downlink(int station, Time now) const;
    std::optional<TxPlan> plan(int node, Time now) const;
    void commit(const TxPlan& p, Time now);

    Time fire_time(const Node& n) const;
    void freeze(Node& n, Time now) const;
    void reschedule(Time now);

    void sample_cwnd(FlowState& fs, Time now, bool force);
    void finish(Time now)
    {
        stopped_ = true;
        end_time_ = now;
    }
    bool all_bursts_done() const { return bursts_done_ == bursts_.size(); }

    const Scenario& sc_;
    Rng rng_;
    SimTrace trace_;

    std::priority_queue<Event, std::vector<Event>, EventLater> events_;
    std::uint64_t next_order_ = 0;

    std::vector<FlowState> flows_;
    std::vector<Node> nodes_;
    std::vector<std::deque<Segment>> dl_;  // AP downlink FIFO per destination
    std::vector<std::int64_t> dl_bytes_;
    std::size_t rr_next_ = 1;

    std::vector<traffic::Burst> bursts_;
    std::vector<BurstState> burst_state_;
    std::size_t bursts_done_ = 0;

    int twt_sta_ = -1;
    int dut_flow_ = -1;

    bool busy_ = false;
    Time idle_since_ = 0;
    std::uint64_t access_gen_ = 0;
    TxPlan current_;
    std::vector<Segment> in_air_;

    bool session_over_ = false;
    bool stopped_ = false;
    Time end_time_ = 0;
};

std::int64_t Simulator::window_us(int station, Time now) const
{
    const auto& tw = sc_.stations[static_cast<std::size_t>(station)].twt;
    if (!tw)
        return sc_.mac.txop_limit_us;
    const Time rem = twt::window_remaining_ns(*tw, now);
    if (rem <= 0)
        return 0;
    return std::min<std::int64_t>((rem - 1) / kNsPerUs, sc_.mac.txop_limit_us);
}

SimTrace Simulator::run()
{
    sc_.validate();

    const std::size_t n_sta = sc_.stations.size();
    nodes_.assign(n_sta, Node{});
    dl_.assign(n_sta, {});
    dl_bytes_.assign(n_sta, 0);
    twt_sta_ = sc_.twt_station();

    trace_.duration_s = sc_.duration_s;
    trace_.dut_station = sc_.dut.model != DutModel::none ? sc_.dut.dst : -1;

    auto add_flow = [&](transport::FlowSource src, int dst, transport::FlowKind kind) {
        FlowState fs;
        const int id = static_cast<int>(flows_.size());
        fs.flow = transport::make_flow(id, src, dst, kind, sc_.mac.mpdu_payload_bytes, sc_.transport);
        fs.info = FlowInfo{id, dst, kind, src, 0, 0};
        const Time rtt = to_ns(fs.flow.base_rtt_s);
        fs.fwd_delay = rtt / 2;
        fs.back_delay = rtt - rtt / 2;
        flows_.push_back(std::move(fs));
        return id;
    };
    for (const auto& bg : sc_.background)
        for (int i = 0; i < bg.streams; ++i)
            add_flow(transport::FlowSource::local_ap, bg.dst, transport::FlowKind::saturated);
    if (sc_.dut.model == DutModel::saturated)
        dut_flow_ = add_flow(sc_.dut.src, sc_.dut.dst, transport::FlowKind::saturated);
    else if (sc_.dut.model != DutModel::none)
        dut_flow_ = add_flow(sc_.dut.src, sc_.dut.dst, transport::FlowKind::burst_driven);
    trace_.dut_flow = dut_flow_;

    bursts_ = dut_bursts(sc_);
    burst_state_.resize(bursts_.size());
    for (std::size_t i = 0; i < bursts_.size(); ++i)
    {
        burst_state_[i].remaining = bursts_[i].size_bytes;
        push(to_ns(bursts_[i].release_time_s), EventType::burst_release, static_cast<int>(i));
    }

    if (twt_sta_ >= 0 && gated(twt_sta_))
        push(sc_.stations[static_cast<std::size_t>(twt_sta_)].twt->offset_us * kNsPerUs, EventType::wake_edge, 1);

    const Time session_end = to_ns(sc_.duration_s);
    push(session_end, EventType::session_end);
    push(session_end + to_ns(sc_.drain_s), EventType::drain_end);

    for (std::size_t f = 0; f < flows_.size(); ++f)
        if (flows_[f].flow.kind == transport::FlowKind::saturated)
            try_send(static_cast<int>(f), 0);
    reschedule(0);

    while (!stopped_ && !events_.empty())
    {
        const Event ev = events_.top();
        events_.pop();
        switch (ev.type)
        {
            case EventType::flow_arrival: on_flow_arrival(ev.a, ev.time); break;
            case EventType::ack_arrival: on_ack_arrival(ev.a, static_cast<int>(ev.b), ev.c, ev.time); break;
            case EventType::burst_release: on_burst_release(ev.a, ev.time); break;
            case EventType::access: on_access(static_cast<std::uint64_t>(ev.b), ev.time); break;
            case EventType::tx_end: on_tx_end(ev.time); break;
            case EventType::wake_edge: on_wake_edge(ev.a == 1, ev.time); break;
            case EventType::session_end:
                session_over_ = true;
                if (all_bursts_done())
                    finish(ev.time);
                break;
            case EventType::drain_end: finish(ev.time); break;
        }
    }

    trace_.end_s = to_s(end_time_);
    for (const auto& fs : flows_)
        trace_.flows.push_back(fs.info);
    return std::move(trace_);
}

void Simulator::try_send(int f, Time now)
{
    auto& fs = flows_[static_cast<std::size_t>(f)];
    auto& flow = fs.flow;
    const bool saturated = flow.kind == transport::FlowKind::saturated;
    if (!saturated && flow.bytes_in_flight == 0)
        flow = transport::on_idle_restart(flow, to_s(now - fs.last_activity), sc_.transport);

    std::int64_t budget = transport::offer_load(flow);
    const Time arrive = now + fs.fwd_delay;
    bool sent = false;
    while (budget > 0)
    {
        Segment seg;
        seg.flow = f;
        if (saturated)
        {
            if (budget < flow.segment_bytes)
                break;
            seg.bytes = flow.segment_bytes;
            fs.info.generated_bytes += seg.bytes;
        }
        else
        {
            if (fs.unsent.empty())
                break;
            Chunk& c = fs.unsent.front();
            seg.bytes = std::min(flow.segment_bytes, c.bytes);
            if (seg.bytes > budget)
                break;
            seg.burst = c.burst;
            if (!c.retransmit)
                fs.info.generated_bytes += seg.bytes;
            c.bytes -= seg.bytes;
            if (c.bytes == 0)
                fs.unsent.pop_front();
            flow.unsent_bytes -= seg.bytes;
        }
        seg.seq = flow.next_seq++;
        flow.bytes_in_flight += seg.bytes;
        budget -= seg.bytes;
        fs.transit.push_back({arrive, seg});
        sent = true;
    }
    if (sent)
    {
        fs.last_activity = now;
        push(arrive, EventType::flow_arrival, f);
    }
}

void Simulator::on_flow_arrival(int f, Time now)
{
    auto& fs = flows_[static_cast<std::size_t>(f)];
    bool dropped = false;
    while (!fs.transit.empty() && fs.transit.front().arrive <= now)
    {
        const Segment seg = fs.transit.front().seg;
        fs.transit.pop_front();
        if (fs.ap_queued >= fs.flow.queue_limit_segments)
        {
            fs.flow = transport::on_drop(fs.flow, seg.seq);
            fs.flow.bytes_in_flight -= seg.bytes;
            ++fs.info.dropped_segments;
            if (fs.flow.kind == transport::FlowKind::burst_driven)
            {
                fs.unsent.push_front({seg.burst, seg.bytes, true});
                fs.flow.unsent_bytes += seg.bytes;
            }
            dropped = true;
            continue;
        }
        dl_[static_cast<std::size_t>(fs.flow.dst)].push_back(seg);
        dl_bytes_[static_cast<std::size_t>(fs.flow.dst)] += seg.bytes;
        ++fs.ap_queued;
    }
    if (dropped)
    {
        sample_cwnd(fs, now, true);
        try_send(f, now);
    }
    reschedule(now);
}

void Simulator::on_ack_arrival(int f, int segments, std::int64_t bytes, Time now)
{
    auto& fs = flows_[static_cast<std::size_t>(f)];
    fs.flow.bytes_in_flight -= bytes;
    fs.flow = transport::on_ack(fs.flow, segments);
    fs.last_activity = now;
    sample_cwnd(fs, now, false);
    try_send(f, now);
}

void Simulator::on_burst_release(int b, Time now)
{
    auto& fs = flows_[static_cast<std::size_t>(dut_flow_)];
    const auto& burst = bursts_[static_cast<std::size_t>(b)];
    fs.unsent.push_back({b, burst.size_bytes, false});
    fs.flow.unsent_bytes += burst.size_bytes;
    try_send(dut_flow_, now);
}

void Simulator::on_wake_edge(bool start, Time now)
{
    const auto& tw = *sc_.stations[static_cast<std::size_t>(twt_sta_)].twt;
    if (start)
        push(now + tw.sp_us * kNsPerUs, EventType::wake_edge, 0);
    else
        push(now + tw.wi_us * kNsPerUs, EventType::wake_edge, 1);
    reschedule(now);
}

std::optional<TxPlan> Simulator::plan_downlink(int station, Time now) const
{
    const auto sta = static_cast<std::size_t>(station);
    if (dl_[sta].empty())
        return std::nullopt;
    const double rate = sc_.stations[sta].phy_rate_mbps;
    const int n = mac::aggregate(dl_bytes_[sta], rate, window_us(station, now), sc_.mac);
    if (n == 0)
        return std::nullopt;
    TxPlan p;
    p.kind = TxKind::downlink;
    p.node = 0;
    p.station = station;
    p.count = std::min<int>(n, static_cast<int>(dl_[sta].size()));
    std::int64_t bytes = 0;
    for (int i = 0; i < p.count; ++i)
        bytes += dl_[sta][static_cast<std::size_t>(i)].bytes;
    p.duration = sc_.mac.per_frame_overhead_us * kNsPerUs + airtime_ns(bytes, rate);
    return p;
}

std::optional<TxPlan> Simulator::plan(int node, Time now) const
{
    if (node == 0)
    {
        const bool priority = sc_.scheduler == ApScheduler::twt_priority && twt_sta_ >= 0 && gated(twt_sta_);
        if (priority)
            if (auto p = plan_downlink(twt_sta_, now))
                return p;
        const std::size_t n_sta = sc_.stations.size();
        for (std::size_t k = 0; k + 1 < n_sta; ++k)
        {
            const std::size_t sta = 1 + (rr_next_ - 1 + k) % (n_sta - 1);
            if (priority && static_cast<int>(sta) == twt_sta_)
                continue;
            if (auto p = plan_downlink(static_cast<int>(sta), now))
            {
                p->round_robin_pick = true;
                return p;
            }
        }
        return std::nullopt;
    }

    const auto& n = nodes_[static_cast<std::size_t>(node)];
    if (n.acks.empty())
        return std::nullopt;
    const std::int64_t limit = window_us(node, now);
    if (limit < sc_.mac.per_frame_overhead_us)
        return std::nullopt;
    const double rate = sc_.stations[static_cast<std::size_t>(node)].phy_rate_mbps;
    const double per_ack = mac::payload_airtime_us(sc_.mac.ack_frame_bytes, rate);
    const auto fit = static_cast<std::int64_t>(
        std::floor(static_cast<double>(limit - sc_.mac.per_frame_overhead_us) / per_ack));
    const auto count = std::min<std::int64_t>(
        {fit, static_cast<std::int64_t>(n.acks.size()), static_cast<std::int64_t>(sc_.mac.max_ampdu_mpdus)});
    if (count <= 0)
        return std::nullopt;
    TxPlan p;
    p.kind = TxKind::uplink;
    p.node = node;
    p.station = node;
    p.count = static_cast<int>(count);
    p.duration = sc_.mac.per_frame_overhead_us * kNsPerUs + airtime_ns(count * sc_.mac.ack_frame_bytes, rate);
    return p;
}

void Simulator::commit(const TxPlan& p, Time now)
{
    current_ = p;
    in_air_.clear();
    if (p.kind == TxKind::downlink)
    {
        auto& q = dl_[static_cast<std::size_t>(p.station)];
        for (int i = 0; i < p.count; ++i)
        {
            in_air_.push_back(q.front());
            dl_bytes_[static_cast<std::size_t>(p.station)] -= q.front().bytes;
            q.pop_front();
        }
        if (p.round_robin_pick)
            rr_next_ = static_cast<std::size_t>(p.station) + 1;
        if (rr_next_ >= sc_.stations.size())
            rr_next_ = 1;
    }
    trace_.airtime.push_back({to_s(now), to_s(now + p.duration), p.station,
                              p.kind == TxKind::downlink ? AirtimeKind::downlink : AirtimeKind::uplink});
    busy_ = true;
    push(now + p.duration, EventType::tx_end);
}

void Simulator::on_tx_end(Time now)
{
    busy_ = false;
    idle_since_ = now;
    if (current_.count > 0 && current_.kind == TxKind::downlink)
    {
        auto& client = nodes_[static_cast<std::size_t>(current_.station)];
        // per-flow totals for this A-MPDU, in first-seen order
        std::vector<AckRecord> per_flow;
        for (const auto& seg : in_air_)
        {
            auto it = std::find_if(per_flow.begin(), per_flow.end(), [&](const AckRecord& r) { return r.flow == seg.flow; });
            if (it == per_flow.end())
                per_flow.push_back({seg.flow, 1, seg.bytes});
            else
            {
                ++it->segments;
                it->bytes += seg.bytes;
            }
            if (seg.burst >= 0)
            {
                auto& bs = burst_state_[static_cast<std::size_t>(seg.burst)];
                if (bs.serve_start < 0)
                    bs.serve_start = now;
                bs.remaining -= seg.bytes;
                if (bs.remaining == 0 && !bs.done)
                {
                    bs.done = true;
                    ++bursts_done_;
                    trace_.dut_burst_serve.push_back({seg.burst, to_s(bs.serve_start), to_s(now)});
                }
            }
        }
        for (const auto& r : per_flow)
        {
            trace_.deliveries.push_back({to_s(now), current_.station, r.flow, r.bytes});
            flows_[static_cast<std::size_t>(r.flow)].ap_queued -= r.segments;
            auto it = std::find_if(client.acks.begin(), client.acks.end(),
                                   [&](const AckRecord& a) { return a.flow == r.flow; });
            if (it == client.acks.end())
                client.acks.push_back(r);
            else
            {
                it->segments += r.segments;
                it->bytes += r.bytes;
            }
        }
        if (session_over_ && all_bursts_done())
        {
            finish(now);
            return;
        }
    }
    else if (current_.count > 0)
    {
        auto& client = nodes_[static_cast<std::size_t>(current_.station)];
        for (int i = 0; i < current_.count; ++i)
        {
            const auto& r = client.acks[static_cast<std::size_t>(i)];
            push(now + flows_[static_cast<std::size_t>(r.flow)].back_delay, EventType::ack_arrival, r.flow, r.segments,
                 r.bytes);
        }
        client.acks.erase(client.acks.begin(), client.acks.begin() + current_.count);
    }
    current_ = TxPlan{};
    current_.count = 0;
    reschedule(now);
}

Time Simulator::fire_time(const Node& n) const
{
    const Time start = std::max(idle_since_, n.active_since) + sc_.mac.difs_us * kNsPerUs;
    return start + static_cast<Time>(n.backoff) * sc_.mac.slot_us * kNsPerUs;
}

void Simulator::freeze(Node& n, Time now) const
{
    const Time start = std::max(idle_since_, n.active_since) + sc_.mac.difs_us * kNsPerUs;
    if (now > start)
    {
        const auto elapsed = static_cast<int>((now - start) / (sc_.mac.slot_us * kNsPerUs));
        n.backoff = std::max(0, n.backoff - elapsed);
    }
    n.active_since = -1;
}

void Simulator::reschedule(Time now)
{
    if (busy_ || stopped_)
        return;
    Time best = kNever;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
        auto& n = nodes_[i];
        const bool want = plan(static_cast<int>(i), now).has_value();
        if (want && n.active_since < 0)
        {
            n.active_since = now;
            if (n.backoff < 0)
                n.backoff = mac::backoff_draw(n.stage, sc_.mac, rng_);
        }
        else if (!want && n.active_since >= 0)
        {
            freeze(n, now);
        }
        if (n.active_since >= 0)
            best = std::min(best, fire_time(n));
    }
    ++access_gen_;
    if (best != kNever)
        push(best, EventType::access, 0, static_cast<std::int64_t>(access_gen_));
}

void Simulator::on_access(std::uint64_t gen, Time now)
{
    if (gen != access_gen_ || busy_)
        return;
    std::vector<TxPlan> plans;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
        auto& n = nodes_[i];
        if (n.active_since < 0 || fire_time(n) != now)
            continue;
        if (auto p = plan(static_cast<int>(i), now))
            plans.push_back(*p);
        else
            freeze(n, now);
    }
    if (plans.empty())
    {
        reschedule(now);
        return;
    }

    for (auto& n : nodes_)
        if (n.active_since >= 0)
            freeze(n, now);

    const int max_stage = sc_.mac.max_backoff_stage();
    if (plans.size() == 1)
    {
        auto& winner = nodes_[static_cast<std::size_t>(plans[0].node)];
        winner.stage = 0;
        winner.backoff = -1;
        commit(plans[0], now);
        return;
    }

    Time longest = 0;
    for (const auto& p : plans)
    {
        auto& n = nodes_[static_cast<std::size_t>(p.node)];
        n.stage = std::min(n.stage + 1, max_stage);
        n.backoff = -1;
        longest = std::max(longest, p.duration);
    }
    trace_.airtime.push_back({to_s(now), to_s(now + longest), -1, AirtimeKind::collision});
    current_ = TxPlan{};
    current_.count = 0;
    busy_ = true;
    push(now + longest, EventType::tx_end);
}

void Simulator::sample_cwnd(FlowState& fs, Time now, bool force)
{
    if (sc_.cwnd_sample_s <= 0.0)
        return;
    if (!force && fs.last_cwnd_sample >= 0 && now - fs.last_cwnd_sample < to_ns(sc_.cwnd_sample_s))
        return;
    fs.last_cwnd_sample = now;
    trace_.cwnd.push_back(
        {to_s(now), fs.flow.id, fs.flow.cwnd_segments, fs.flow.ssthresh_segments, fs.flow.bytes_in_flight});
}

const char* kind_name(AirtimeKind k)
{
    switch (k)
    {
        case AirtimeKind::downlink: return "downlink";
        case AirtimeKind::uplink: return "uplink";
        case AirtimeKind::collision: return "collision";
    }
    return "downlink";
}

}  // namespace

SimTrace run_sim(const Scenario& scenario)
{
    Simulator sim(scenario);
    return sim.run();
}

std::int64_t delivered_bytes(const SimTrace& trace, int station)
{
    std::int64_t total = 0;
    for (const auto& d : trace.deliveries)
        if (d.station == station && d.time_s < trace.duration_s)
            total += d.bytes;
    return total;
}

double aggregate_throughput_mbps(const SimTrace& trace, int excluded_station)
{
    std::int64_t total = 0;
    for (const auto& d : trace.deliveries)
        if (d.station != excluded_station && d.time_s < trace.duration_s)
            total += d.bytes;
    return static_cast<double>(total) * 8.0 / trace.duration_s / 1e6;
}

void write_deliveries_csv(std::ostream& out, const SimTrace& trace)
{
    out << "time_s,station,flow,bytes\n";
    for (const auto& d : trace.deliveries)
        out << fmt_real(d.time_s) << ',' << d.station << ',' << d.flow << ',' << d.bytes << '\n';
}

void write_airtime_csv(std::ostream& out, const SimTrace& trace)
{
    out << "start_s,end_s,station,kind\n";
    for (const auto& a : trace.airtime)
        out << fmt_real(a.start_s) << ',' << fmt_real(a.end_s) << ',' << a.station << ',' << kind_name(a.kind) << '\n';
}

void write_burst_serve_csv(std::ostream& out, const SimTrace& trace)
{
    out << "burst_index,serve_start_s,serve_end_s\n";
    for (const auto& b : trace.dut_burst_serve)
        out << b.burst_index << ',' << fmt_real(b.serve_start_s) << ',' << fmt_real(b.serve_end_s) << '\n';
}

void write_cwnd_csv(std::ostream& out, const SimTrace& trace)
{
    out << "time_s,flow,cwnd_segments,ssthresh_segments,bytes_in_flight\n";
    for (const auto& c : trace.cwnd)
        out << fmt_real(c.time_s) << ',' << c.flow << ',' << fmt_real(c.cwnd_segments) << ','
            << fmt_real(c.ssthresh_segments) << ',' << c.bytes_in_flight << '\n';
}

}  // namespace twtsim::sim
