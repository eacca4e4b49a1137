#include "twtsim/search.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "twtsim/format.hpp"

namespace twtsim::search {

using experiments::iteration_seed;
using experiments::mean_std;

namespace {

std::vector<double> duty_grid(double step)
{
    std::vector<double> grid;
    const auto n = static_cast<int>(std::lround(100.0 / step));
    for (int k = 1; k <= n; ++k)
        grid.push_back(std::min(100.0, k * step));
    return grid;
}

Scenario phase1_scenario(const Scenario& tmpl, double duty, const SearchSettings& settings)
{
    Scenario sc = experiments::with_schedule(tmpl, duty, 1);
    sc.background.clear();
    sc.dut.model = DutModel::saturated;
    sc.dut.src = transport::FlowSource::local_ap;
    if (sc.dut.dst <= 0)
        sc.dut.dst = sc.twt_station();
    sc.duration_s = settings.phase1_duration_s;
    sc.drain_s = 0.0;
    return sc;
}

DutyPoint evaluate_duty(const Scenario& tmpl, double duty, const SearchSettings& settings)
{
    std::vector<Scenario> runs;
    for (int i = 0; i < settings.seeds; ++i)
    {
        Scenario sc = phase1_scenario(tmpl, duty, settings);
        sc.seed = iteration_seed(settings.master_seed, i);
        runs.push_back(std::move(sc));
    }
    DutyPoint p;
    p.duty_pct = duty;
    for (const auto& o : experiments::evaluate_sessions(runs, settings.interval_s))
        p.per_seed_mbps.push_back(o.qos.avg_throughput_mbps);
    const auto ms = mean_std(p.per_seed_mbps);
    p.mean_mbps = ms.mean;
    p.std_mbps = ms.stddev;
    return p;
}

nlohmann::json session_json(const SessionRecord& s)
{
    return {{"model", s.model},
            {"duty_pct", s.duty_pct},
            {"mf", s.mf},
            {"iteration", s.iteration},
            {"seed", s.seed},
            {"qos1_mbps", s.report.avg_throughput_mbps},
            {"qos2_underrun_events", s.report.underrun_events},
            {"underrun_time_s", s.report.underrun_time_s},
            {"throughput_variation", s.report.throughput_variation},
            {"offered_mbps", s.offered_mbps},
            {"pass", s.pass}};
}

}  // namespace

void SearchSettings::validate() const
{
    if (seeds <= 0)
        throw std::invalid_argument("search: seeds must be positive");
    if (!(phase1_duration_s > 0.0))
        throw std::invalid_argument("search: phase1_duration_s must be positive");
    if (!(duty_step_pct > 0.0 && duty_step_pct <= 100.0))
        throw std::invalid_argument("search: duty_step_pct must be in (0, 100]");
    if (!(interval_s > 0.0))
        throw std::invalid_argument("search: interval_s must be positive");
    if (max_underruns < 0)
        throw std::invalid_argument("search: max_underruns must be non-negative");
    if (!twt::is_power_of_two(max_mf))
        throw std::invalid_argument("search: max_mf must be a power of two");
    for (double d : table4_duties)
        if (!(d > 0.0 && d <= 100.0))
            throw std::invalid_argument("search: table4 duties must be in (0, 100]");
}

std::vector<DutyPoint> duty_sweep(const Scenario& tmpl, const SearchSettings& settings)
{
    std::vector<DutyPoint> curve;
    for (double d : duty_grid(settings.duty_step_pct))
        curve.push_back(evaluate_duty(tmpl, d, settings));
    return curve;
}

Phase1Result phase1_min_duty(const Scenario& tmpl, double target_mbps, const SearchSettings& settings)
{
    settings.validate();
    const auto grid = duty_grid(settings.duty_step_pct);
    const DutyPoint full = evaluate_duty(tmpl, grid.back(), settings);
    if (full.mean_mbps < target_mbps)
        throw InfeasibleTarget("target " + fmt_real(target_mbps) + " Mbps exceeds the always-awake throughput of " +
                               fmt_real(full.mean_mbps) + " Mbps");

    Phase1Result r;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        r.curve.push_back(evaluate_duty(tmpl, grid[i], settings));
    r.curve.push_back(full);
    r.duty_pct = grid.back();
    for (const auto& p : r.curve)
        if (p.mean_mbps >= target_mbps)
        {
            r.duty_pct = p.duty_pct;
            break;
        }
    return r;
}

MfPoint evaluate_mf(const Scenario& tmpl, double duty_pct, int mf, const SearchSettings& settings)
{
    const Scenario base = experiments::with_model(experiments::with_schedule(tmpl, duty_pct, mf), DutModel::cbr);
    std::vector<Scenario> runs;
    for (int i = 0; i < settings.seeds; ++i)
    {
        Scenario sc = base;
        sc.seed = iteration_seed(settings.master_seed, i);
        runs.push_back(std::move(sc));
    }
    std::vector<double> times;
    double events = 0.0;
    double cv = 0.0;
    for (const auto& o : experiments::evaluate_sessions(runs, settings.interval_s))
    {
        times.push_back(o.qos.underrun_time_s);
        events += o.qos.underrun_events;
        cv += o.qos.throughput_variation;
    }
    MfPoint p;
    p.mf = mf;
    p.schedule = *base.stations[static_cast<std::size_t>(base.twt_station())].twt;
    const auto ms = mean_std(times);
    p.mean_underrun_time_s = ms.mean;
    p.std_underrun_time_s = ms.stddev;
    p.mean_underrun_events = events / settings.seeds;
    p.mean_throughput_variation = cv / settings.seeds;
    return p;
}

std::vector<int> mf_grid(double duty_pct, int max_mf)
{
    std::vector<int> grid;
    for (int mf = 1; mf <= max_mf; mf *= 2)
    {
        try
        {
            (void)twt::schedule_from(duty_pct, mf);
        }
        catch (const std::invalid_argument&)
        {
            break;
        }
        grid.push_back(mf);
    }
    return grid;
}

int select_mf(const std::vector<MfPoint>& curve)
{
    if (curve.empty())
        return 1;
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (!(curve[i].mean_underrun_time_s < curve[i - 1].mean_underrun_time_s))
            return curve[i - 1].mf;
    return curve.back().mf;
}

Phase2Result phase2_select_mf(const Scenario& tmpl, double duty_pct, const SearchSettings& settings)
{
    settings.validate();
    Phase2Result r;
    for (int mf : mf_grid(duty_pct, settings.max_mf))
    {
        r.curve.push_back(evaluate_mf(tmpl, duty_pct, mf, settings));
        const auto n = r.curve.size();
        if (n >= 2 && !(r.curve[n - 1].mean_underrun_time_s < r.curve[n - 2].mean_underrun_time_s))
            break;
    }
    r.mf = select_mf(r.curve);
    return r;
}

std::vector<MfPoint> mf_sweep(const Scenario& tmpl, double duty_pct, const SearchSettings& settings)
{
    std::vector<MfPoint> curve;
    for (int mf : mf_grid(duty_pct, settings.max_mf))
        curve.push_back(evaluate_mf(tmpl, duty_pct, mf, settings));
    return curve;
}

std::vector<SessionRecord> validate_schedule(const Scenario& tmpl, double duty_pct, int mf, DutModel model,
                                             const SearchSettings& settings)
{
    const Scenario base = experiments::with_model(experiments::with_schedule(tmpl, duty_pct, mf), model);
    std::vector<Scenario> runs;
    for (int i = 0; i < settings.seeds; ++i)
    {
        Scenario sc = base;
        sc.seed = iteration_seed(settings.master_seed, i);
        runs.push_back(std::move(sc));
    }
    const auto out = experiments::evaluate_sessions(runs, settings.interval_s);
    std::vector<SessionRecord> sessions;
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        SessionRecord s;
        s.model = to_string(model);
        s.duty_pct = duty_pct;
        s.mf = mf;
        s.iteration = static_cast<int>(i) + 1;
        s.seed = runs[i].seed;
        s.report = out[i].qos;
        s.offered_mbps = out[i].offered_mbps;
        const double required = model == DutModel::cbr ? tmpl.dut.video.bitrate_mbps : out[i].offered_mbps;
        s.pass = qos::qos_pass(s.report, required, settings.max_underruns);
        sessions.push_back(std::move(s));
    }
    return sessions;
}

Phase3Result phase3_validate(const Scenario& tmpl, double duty_pct, int mf, const SearchSettings& settings)
{
    settings.validate();
    Phase3Result r;
    r.mf = mf;
    double duty = duty_pct;
    for (;;)
    {
        auto sessions = validate_schedule(tmpl, duty, mf, DutModel::cbr, settings);
        const bool all_pass = std::all_of(sessions.begin(), sessions.end(), [](const auto& s) { return s.pass; });
        r.sessions.insert(r.sessions.end(), sessions.begin(), sessions.end());
        r.duty_pct = duty;
        if (all_pass)
        {
            r.converged = true;
            break;
        }
        if (duty >= 100.0)
            break;
        duty = std::min(100.0, duty + settings.duty_step_pct);
    }
    r.schedule = twt::schedule_from(r.duty_pct, mf);
    if (r.converged)
    {
        auto vbr = validate_schedule(tmpl, r.duty_pct, mf, DutModel::vbr, settings);
        r.vbr_pass = std::all_of(vbr.begin(), vbr.end(), [](const auto& s) { return s.pass; });
        r.sessions.insert(r.sessions.end(), vbr.begin(), vbr.end());
    }
    return r;
}

SearchResult run_search(const Scenario& tmpl, const SearchSettings& settings)
{
    const double target = tmpl.dut.video.bitrate_mbps;
    const auto p1 = phase1_min_duty(tmpl, target, settings);
    const auto p2 = phase2_select_mf(tmpl, p1.duty_pct, settings);
    const auto p3 = phase3_validate(tmpl, p1.duty_pct, p2.mf, settings);

    SearchResult r;
    r.phase1_duty_pct = p1.duty_pct;
    r.phase1_curve = p1.curve;
    r.phase2_curve = p2.curve;
    r.phase3_sessions = p3.sessions;
    for (const auto& s : p3.sessions)
        if (s.model == to_string(DutModel::cbr))
            r.phase3_reports.push_back(s.report);
    r.duty_percent = p3.duty_pct;
    r.mf = p3.mf;
    r.schedule = p3.schedule;
    r.converged = p3.converged;
    r.vbr_pass = p3.vbr_pass;
    return r;
}

nlohmann::json to_json(const SearchResult& r)
{
    nlohmann::json p1 = nlohmann::json::array();
    for (const auto& p : r.phase1_curve)
        p1.push_back({{"duty_pct", p.duty_pct}, {"mean_mbps", p.mean_mbps}, {"std_mbps", p.std_mbps}});
    nlohmann::json p2 = nlohmann::json::array();
    for (const auto& p : r.phase2_curve)
        p2.push_back({{"mf", p.mf},
                      {"schedule", twt::to_json(p.schedule)},
                      {"mean_underrun_time_s", p.mean_underrun_time_s},
                      {"std_underrun_time_s", p.std_underrun_time_s},
                      {"mean_underrun_events", p.mean_underrun_events},
                      {"mean_throughput_variation", p.mean_throughput_variation}});
    nlohmann::json p3 = nlohmann::json::array();
    for (const auto& s : r.phase3_sessions)
        p3.push_back(session_json(s));
    return {{"converged", r.converged},
            {"vbr_pass", r.vbr_pass},
            {"duty_percent", r.duty_percent},
            {"mf", r.mf},
            {"schedule", twt::to_json(r.schedule)},
            {"phase1_duty_pct", r.phase1_duty_pct},
            {"phase1_curve", p1},
            {"phase2_curve", p2},
            {"phase3_sessions", p3}};
}

void write_phase1_csv(std::ostream& out, const std::vector<DutyPoint>& curve)
{
    out << "duty_pct,mean_mbps,std_mbps\n";
    for (const auto& p : curve)
        out << fmt_real(p.duty_pct) << ',' << fmt_real(p.mean_mbps) << ',' << fmt_real(p.std_mbps) << '\n';
}

void write_phase2_csv(std::ostream& out, const std::vector<MfPoint>& curve)
{
    out << "mf,sp_us,wi_us,mean_underrun_time_s,std_underrun_time_s,mean_underrun_events,mean_throughput_cv\n";
    for (const auto& p : curve)
        out << p.mf << ',' << p.schedule.sp_us << ',' << p.schedule.wi_us << ',' << fmt_real(p.mean_underrun_time_s)
            << ',' << fmt_real(p.std_underrun_time_s) << ',' << fmt_real(p.mean_underrun_events) << ','
            << fmt_real(p.mean_throughput_variation) << '\n';
}

void write_sessions_csv(std::ostream& out, const std::vector<SessionRecord>& sessions)
{
    out << "model,duty_pct,mf,iteration,seed,qos1_mbps,qos2_underrun_events,underrun_time_s,throughput_cv,"
           "offered_mbps,pass\n";
    for (const auto& s : sessions)
        out << s.model << ',' << fmt_real(s.duty_pct) << ',' << s.mf << ',' << s.iteration << ',' << s.seed << ','
            << fmt_real(s.report.avg_throughput_mbps) << ',' << s.report.underrun_events << ','
            << fmt_real(s.report.underrun_time_s) << ',' << fmt_real(s.report.throughput_variation) << ','
            << fmt_real(s.offered_mbps) << ',' << (s.pass ? 1 : 0) << '\n';
}

}  // namespace twtsim::search
