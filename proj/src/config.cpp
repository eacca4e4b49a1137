#include "twtsim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace twtsim::config {

namespace {

struct Entry
{
    std::string key;
    std::string value;
    int line = 0;
};

struct Section
{
    std::string name;
    std::string arg;
    int line = 0;
    std::vector<Entry> entries;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_real(const Entry& e)
{
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last)
        throw ConfigError(e.line, "'" + e.key + "' expects a number, got '" + e.value + "'");
    return v;
}

template <typename Int>
Int to_int(const Entry& e)
{
    Int v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last)
        throw ConfigError(e.line, "'" + e.key + "' expects an integer, got '" + e.value + "'");
    return v;
}

std::vector<double> to_real_list(const Entry& e)
{
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(to_real({e.key, trim(item), e.line}));
    if (out.empty())
        throw ConfigError(e.line, "'" + e.key + "' expects a comma-separated list");
    return out;
}

using Handlers = std::map<std::string, std::function<void(const Entry&)>>;

void apply(const Section& s, const Handlers& handlers)
{
    std::set<std::string> seen;
    for (const auto& e : s.entries)
    {
        const auto it = handlers.find(e.key);
        if (it == handlers.end())
            throw ConfigError(e.line, "unknown key '" + e.key + "' in [" + s.name + "]");
        if (!seen.insert(e.key).second)
            throw ConfigError(e.line, "duplicate key '" + e.key + "' in [" + s.name + "]");
        it->second(e);
    }
}

std::vector<Section> tokenize(const std::string& text)
{
    std::vector<Section> sections{{"", "", 0, {}}};
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty())
            continue;
        if (s.front() == '[')
        {
            if (s.back() != ']')
                throw ConfigError(line, "unterminated section header");
            const std::string inner = trim(s.substr(1, s.size() - 2));
            const auto sp = inner.find_first_of(" \t");
            Section sec;
            sec.name = inner.substr(0, sp);
            sec.arg = sp == std::string::npos ? "" : trim(inner.substr(sp));
            sec.line = line;
            if (sec.name.empty())
                throw ConfigError(line, "empty section name");
            sections.push_back(std::move(sec));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "expected 'key = value'");
        Entry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
        if (e.key.empty() || e.value.empty())
            throw ConfigError(line, "expected 'key = value'");
        sections.back().entries.push_back(std::move(e));
    }
    return sections;
}

int find_station(const Scenario& sc, const std::string& name)
{
    for (const auto& s : sc.stations)
        if (s.name == name)
            return s.id;
    return -1;
}

struct PendingStation
{
    Station st;
    int line = 0;
};

}  // namespace

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

RunSetup parse_config(const std::string& text)
{
    const auto sections = tokenize(text);

    bool have_format = false;
    bool have_scenario = false;
    for (const auto& e : sections.front().entries)
    {
        if (e.key != "format")
            throw ConfigError(e.line, "key '" + e.key + "' outside any section");
        if (to_int<int>(e) != 1)
            throw ConfigError(e.line, "unsupported format version '" + e.value + "'");
        have_format = true;
    }
    std::size_t n_stations = 0;
    for (const auto& s : sections)
    {
        have_scenario = have_scenario || s.name == "scenario";
        n_stations += s.name == "station" ? 1 : 0;
    }
    {
        std::vector<std::string> missing;
        if (!have_format)
            missing.emplace_back("format = 1");
        if (!have_scenario)
            missing.emplace_back("[scenario]");
        if (n_stations == 0)
            missing.emplace_back("[station NAME]");
        if (!missing.empty())
        {
            std::string msg = "missing required:";
            for (const auto& m : missing)
                msg += " " + m;
            throw ConfigError(0, msg);
        }
    }

    RunSetup out;
    Scenario& sc = out.scenario;
    auto& ss = out.search;

    Station ap;
    ap.id = 0;
    ap.name = "ap";
    ap.role = StationRole::ap;
    ap.phy_rate_mbps = 1.0;
    sc.stations.push_back(ap);

    std::vector<PendingStation> pending;
    const Section* twt_sec = nullptr;
    const Section* traffic_sec = nullptr;
    const Section* background_sec = nullptr;
    std::set<std::string> singletons;

    for (std::size_t i = 1; i < sections.size(); ++i)
    {
        const Section& s = sections[i];
        if (s.name != "station")
        {
            if (!s.arg.empty())
                throw ConfigError(s.line, "section [" + s.name + "] takes no argument");
            if (!singletons.insert(s.name).second)
                throw ConfigError(s.line, "duplicate section [" + s.name + "]");
        }

        if (s.name == "scenario")
        {
            apply(s, {
                         {"duration_s", [&](const Entry& e) { sc.duration_s = to_real(e); }},
                         {"drain_s", [&](const Entry& e) { sc.drain_s = to_real(e); }},
                         {"seed", [&](const Entry& e) { sc.seed = to_int<std::uint64_t>(e); }},
                         {"cwnd_sample_s", [&](const Entry& e) { sc.cwnd_sample_s = to_real(e); }},
                         {"scheduler",
                          [&](const Entry& e) {
                              if (e.value == "twt_priority")
                                  sc.scheduler = ApScheduler::twt_priority;
                              else if (e.value == "round_robin")
                                  sc.scheduler = ApScheduler::round_robin;
                              else
                                  throw ConfigError(e.line, "scheduler must be twt_priority or round_robin");
                          }},
                     });
        }
        else if (s.name == "mac")
        {
            auto& m = sc.mac;
            apply(s, {
                         {"slot_us", [&](const Entry& e) { m.slot_us = to_int<std::int64_t>(e); }},
                         {"sifs_us", [&](const Entry& e) { m.sifs_us = to_int<std::int64_t>(e); }},
                         {"difs_us", [&](const Entry& e) { m.difs_us = to_int<std::int64_t>(e); }},
                         {"cw_min", [&](const Entry& e) { m.cw_min = to_int<int>(e); }},
                         {"cw_max", [&](const Entry& e) { m.cw_max = to_int<int>(e); }},
                         {"max_ampdu_mpdus", [&](const Entry& e) { m.max_ampdu_mpdus = to_int<int>(e); }},
                         {"mpdu_payload_bytes", [&](const Entry& e) { m.mpdu_payload_bytes = to_int<std::int64_t>(e); }},
                         {"txop_limit_us", [&](const Entry& e) { m.txop_limit_us = to_int<std::int64_t>(e); }},
                         {"per_frame_overhead_us",
                          [&](const Entry& e) { m.per_frame_overhead_us = to_int<std::int64_t>(e); }},
                         {"ack_frame_bytes", [&](const Entry& e) { m.ack_frame_bytes = to_int<std::int64_t>(e); }},
                     });
        }
        else if (s.name == "transport")
        {
            auto& t = sc.transport;
            apply(s, {
                         {"remote_rtt_s", [&](const Entry& e) { t.remote_rtt_s = to_real(e); }},
                         {"local_rtt_s", [&](const Entry& e) { t.local_rtt_s = to_real(e); }},
                         {"queue_limit_segments", [&](const Entry& e) { t.queue_limit_segments = to_int<int>(e); }},
                         {"initial_cwnd_segments", [&](const Entry& e) { t.initial_cwnd_segments = to_real(e); }},
                         {"initial_ssthresh_segments",
                          [&](const Entry& e) { t.initial_ssthresh_segments = to_real(e); }},
                         {"idle_restart_s", [&](const Entry& e) { t.idle_restart_s = to_real(e); }},
                     });
        }
        else if (s.name == "station")
        {
            if (s.arg.empty())
                throw ConfigError(s.line, "[station] needs a name, e.g. [station client1]");
            PendingStation p;
            p.line = s.line;
            p.st.name = s.arg;
            p.st.role = StationRole::client;
            apply(s, {
                         {"standalone_mbps", [&](const Entry& e) { p.st.standalone_mbps = to_real(e); }},
                         {"phy_rate_mbps", [&](const Entry& e) { p.st.phy_rate_mbps = to_real(e); }},
                         {"rssi_dbm", [&](const Entry& e) { p.st.rssi_dbm = to_int<int>(e); }},
                     });
            if ((p.st.standalone_mbps > 0.0) == (p.st.phy_rate_mbps > 0.0))
                throw ConfigError(s.line, "station '" + s.arg + "' needs exactly one of standalone_mbps, phy_rate_mbps");
            pending.push_back(std::move(p));
        }
        else if (s.name == "twt")
            twt_sec = &s;
        else if (s.name == "traffic")
            traffic_sec = &s;
        else if (s.name == "background")
            background_sec = &s;
        else if (s.name == "search")
        {
            apply(s, {
                         {"seeds", [&](const Entry& e) { ss.seeds = to_int<int>(e); }},
                         {"master_seed", [&](const Entry& e) { ss.master_seed = to_int<std::uint64_t>(e); }},
                         {"phase1_duration_s", [&](const Entry& e) { ss.phase1_duration_s = to_real(e); }},
                         {"duty_step_pct", [&](const Entry& e) { ss.duty_step_pct = to_real(e); }},
                         {"interval_s", [&](const Entry& e) { ss.interval_s = to_real(e); }},
                         {"max_underruns", [&](const Entry& e) { ss.max_underruns = to_int<int>(e); }},
                         {"max_mf", [&](const Entry& e) { ss.max_mf = to_int<int>(e); }},
                         {"table4_duties", [&](const Entry& e) { ss.table4_duties = to_real_list(e); }},
                     });
        }
        else
            throw ConfigError(s.line, "unknown section [" + s.name + "]");
    }

    for (auto& p : pending)
    {
        p.st.id = static_cast<int>(sc.stations.size());
        if (p.st.standalone_mbps > 0.0)
        {
            try
            {
                sc.mac.validate();
                p.st.phy_rate_mbps = mac::phy_rate_for_throughput(p.st.standalone_mbps, sc.mac);
            }
            catch (const std::exception& ex)
            {
                throw ConfigError(p.line, ex.what());
            }
        }
        if (find_station(sc, p.st.name) >= 0)
            throw ConfigError(p.line, "duplicate station '" + p.st.name + "'");
        sc.stations.push_back(p.st);
    }

    auto client_id = [&](const Entry& e) {
        const int id = find_station(sc, e.value);
        if (id <= 0)
            throw ConfigError(e.line, "unknown station '" + e.value + "'");
        return id;
    };

    if (twt_sec)
    {
        int sta = -1;
        std::optional<double> duty;
        std::optional<int> mf;
        std::optional<std::int64_t> sp, wi;
        std::int64_t offset = 0;
        apply(*twt_sec, {
                            {"station", [&](const Entry& e) { sta = client_id(e); }},
                            {"duty_pct", [&](const Entry& e) { duty = to_real(e); }},
                            {"mf", [&](const Entry& e) { mf = to_int<int>(e); }},
                            {"sp_us", [&](const Entry& e) { sp = to_int<std::int64_t>(e); }},
                            {"wi_us", [&](const Entry& e) { wi = to_int<std::int64_t>(e); }},
                            {"offset_us", [&](const Entry& e) { offset = to_int<std::int64_t>(e); }},
                        });
        if (sta < 0)
            throw ConfigError(twt_sec->line, "[twt] missing required field 'station'");
        if (duty.has_value() == (sp.has_value() || wi.has_value()))
            throw ConfigError(twt_sec->line, "[twt] needs either duty_pct (with optional mf) or sp_us and wi_us");
        try
        {
            if (duty)
                sc.stations[static_cast<std::size_t>(sta)].twt = twt::schedule_from(*duty, mf.value_or(1), offset);
            else
            {
                if (!sp || !wi)
                    throw ConfigError(twt_sec->line, "[twt] sp_us and wi_us must be given together");
                twt::TwtSchedule t{*sp, *wi, offset, mf.value_or(1)};
                t.validate();
                sc.stations[static_cast<std::size_t>(sta)].twt = t;
            }
        }
        catch (const std::invalid_argument& ex)
        {
            throw ConfigError(twt_sec->line, ex.what());
        }
    }

    if (traffic_sec)
    {
        std::optional<DutModel> model;
        int sta = -1;
        std::optional<double> bitrate, lambda;
        traffic::VideoParams v;
        apply(*traffic_sec,
              {
                  {"model",
                   [&](const Entry& e) {
                       if (e.value == "none")
                           model = DutModel::none;
                       else if (e.value == "cbr")
                           model = DutModel::cbr;
                       else if (e.value == "vbr")
                           model = DutModel::vbr;
                       else if (e.value == "saturated")
                           model = DutModel::saturated;
                       else
                           throw ConfigError(e.line, "model must be none, cbr, vbr or saturated");
                   }},
                  {"station", [&](const Entry& e) { sta = client_id(e); }},
                  {"source",
                   [&](const Entry& e) {
                       if (e.value == "remote_server")
                           sc.dut.src = transport::FlowSource::remote_server;
                       else if (e.value == "local_ap")
                           sc.dut.src = transport::FlowSource::local_ap;
                       else
                           throw ConfigError(e.line, "source must be remote_server or local_ap");
                   }},
                  {"bitrate_mbps", [&](const Entry& e) { bitrate = to_real(e); }},
                  {"frame_rate", [&](const Entry& e) { v.frame_rate = to_int<int>(e); }},
                  {"weibull_shape_k", [&](const Entry& e) { v.weibull_shape_k = to_real(e); }},
                  {"weibull_scale_lambda", [&](const Entry& e) { lambda = to_real(e); }},
                  {"ibt_mean_s", [&](const Entry& e) { v.ibt_mean_s = to_real(e); }},
                  {"ibt_variance_s2", [&](const Entry& e) { v.ibt_variance_s2 = to_real(e); }},
                  {"ibt_min_s", [&](const Entry& e) { v.ibt_min_s = to_real(e); }},
                  {"ibt_max_s", [&](const Entry& e) { v.ibt_max_s = to_real(e); }},
              });
        if (!model)
            throw ConfigError(traffic_sec->line, "[traffic] missing required field 'model'");
        if (*model != DutModel::none && sta < 0)
            throw ConfigError(traffic_sec->line, "[traffic] missing required field 'station'");
        const auto base = traffic::VideoParams::for_bitrate(bitrate.value_or(v.bitrate_mbps));
        v.bitrate_mbps = base.bitrate_mbps;
        v.weibull_scale_lambda = lambda.value_or(base.weibull_scale_lambda);
        sc.dut.model = *model;
        sc.dut.dst = sta;
        sc.dut.video = v;
    }

    if (background_sec)
    {
        std::set<std::string> seen;
        for (const auto& e : background_sec->entries)
        {
            if (!seen.insert(e.key).second)
                throw ConfigError(e.line, "duplicate background entry '" + e.key + "'");
            const int id = find_station(sc, e.key);
            if (id <= 0)
                throw ConfigError(e.line, "unknown station '" + e.key + "' in [background]");
            sc.background.push_back({id, to_int<int>(e)});
        }
    }

    try
    {
        sc.validate();
        ss.validate();
    }
    catch (const std::invalid_argument& ex)
    {
        throw ConfigError(0, ex.what());
    }
    return out;
}

RunSetup load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(0, "cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

nlohmann::json scenario_to_json(const Scenario& sc)
{
    nlohmann::json stations = nlohmann::json::array();
    for (const auto& s : sc.stations)
    {
        nlohmann::json j{{"id", s.id},
                         {"name", s.name},
                         {"role", s.role == StationRole::ap ? "ap" : "client"},
                         {"phy_rate_mbps", s.phy_rate_mbps},
                         {"rssi_dbm", s.rssi_dbm},
                         {"standalone_mbps", s.standalone_mbps}};
        if (s.twt)
            j["twt"] = twt::to_json(*s.twt);
        stations.push_back(std::move(j));
    }
    nlohmann::json background = nlohmann::json::array();
    for (const auto& b : sc.background)
        background.push_back({{"station", b.dst}, {"streams", b.streams}});
    const auto& v = sc.dut.video;
    return {{"duration_s", sc.duration_s},
            {"drain_s", sc.drain_s},
            {"seed", sc.seed},
            {"scheduler", to_string(sc.scheduler)},
            {"stations", stations},
            {"background", background},
            {"traffic",
             {{"model", to_string(sc.dut.model)},
              {"station", sc.dut.dst},
              {"source", sc.dut.src == transport::FlowSource::local_ap ? "local_ap" : "remote_server"},
              {"bitrate_mbps", v.bitrate_mbps},
              {"frame_rate", v.frame_rate},
              {"weibull_shape_k", v.weibull_shape_k},
              {"weibull_scale_lambda", v.weibull_scale_lambda},
              {"ibt_mean_s", v.ibt_mean_s},
              {"ibt_variance_s2", v.ibt_variance_s2},
              {"ibt_min_s", v.ibt_min_s},
              {"ibt_max_s", v.ibt_max_s}}},
            {"mac",
             {{"slot_us", sc.mac.slot_us},
              {"sifs_us", sc.mac.sifs_us},
              {"difs_us", sc.mac.difs_us},
              {"cw_min", sc.mac.cw_min},
              {"cw_max", sc.mac.cw_max},
              {"max_ampdu_mpdus", sc.mac.max_ampdu_mpdus},
              {"mpdu_payload_bytes", sc.mac.mpdu_payload_bytes},
              {"txop_limit_us", sc.mac.txop_limit_us},
              {"per_frame_overhead_us", sc.mac.per_frame_overhead_us},
              {"ack_frame_bytes", sc.mac.ack_frame_bytes}}},
            {"transport",
             {{"remote_rtt_s", sc.transport.remote_rtt_s},
              {"local_rtt_s", sc.transport.local_rtt_s},
              {"queue_limit_segments", sc.transport.queue_limit_segments},
              {"initial_cwnd_segments", sc.transport.initial_cwnd_segments},
              {"initial_ssthresh_segments", sc.transport.initial_ssthresh_segments},
              {"idle_restart_s", sc.transport.idle_restart_s}}}};
}

}  // namespace twtsim::config
