#include "twtsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>
#include <thread>

#include "twtsim/format.hpp"
#include "twtsim/sim.hpp"

namespace twtsim::experiments {

namespace {

constexpr std::uint64_t kIterationStreamBase = 100;
constexpr std::uint64_t kHeldOutStream = 10'000;

int dut_station_of(const Scenario& sc)
{
    const int t = sc.twt_station();
    return t >= 0 ? t : sc.dut.dst;
}

std::vector<double> ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();)
    {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
            ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

SessionOutcome evaluate_session(const Scenario& scenario, double interval_s)
{
    const auto trace = sim::run_sim(scenario);
    const auto bursts = dut_bursts(scenario);
    SessionOutcome out;
    out.qos = qos::compute_qos(trace, bursts, interval_s);
    out.background_mbps = sim::aggregate_throughput_mbps(trace, trace.dut_station);
    std::int64_t due = 0;
    for (const auto& b : bursts)
        if (b.release_time_s + b.inter_burst_time_s <= scenario.duration_s)
            due += b.size_bytes;
    out.offered_mbps = static_cast<double>(due) * 8.0 / scenario.duration_s / 1e6;
    return out;
}

std::vector<SessionOutcome> evaluate_sessions(const std::vector<Scenario>& scenarios, double interval_s)
{
    std::vector<SessionOutcome> results(scenarios.size());
    std::vector<std::exception_ptr> errors(scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++)
        {
            try
            {
                results[i] = evaluate_session(scenarios[i], interval_s);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min(hw, scenarios.size());
    if (n_threads <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

std::uint64_t iteration_seed(std::uint64_t master, int iteration)
{
    return derive_seed(master, kIterationStreamBase + static_cast<std::uint64_t>(iteration));
}

std::uint64_t held_out_seed(std::uint64_t master)
{
    return derive_seed(master, kHeldOutStream);
}

MeanStd mean_std(const std::vector<double>& values)
{
    MeanStd m;
    if (values.empty())
        return m;
    m.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1)
    {
        double ss = 0.0;
        for (double v : values)
            ss += (v - m.mean) * (v - m.mean);
        m.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return m;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("spearman: need two equally sized samples of length >= 2");
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(rx.size());
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(ry.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i)
    {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

Scenario with_schedule(const Scenario& tmpl, double duty_percent, int mf)
{
    Scenario sc = tmpl;
    const int sta = dut_station_of(sc);
    if (sta <= 0)
        throw std::invalid_argument("scenario has no DUT station to schedule");
    auto& st = sc.stations[static_cast<std::size_t>(sta)];
    const std::int64_t offset = st.twt ? st.twt->offset_us : 0;
    st.twt = twt::schedule_from(duty_percent, mf, offset);
    return sc;
}

Scenario with_model(const Scenario& tmpl, DutModel model)
{
    Scenario sc = tmpl;
    sc.dut.model = model;
    if (model != DutModel::none && sc.dut.dst <= 0)
        sc.dut.dst = dut_station_of(sc);
    return sc;
}

std::vector<Table3Row> table3(const Scenario& tmpl, std::uint64_t master, int iterations, double interval_s)
{
    const int dut = dut_station_of(tmpl);
    std::vector<Scenario> runs;
    for (int i = 0; i < iterations; ++i)
    {
        Scenario base = tmpl;
        base.seed = iteration_seed(master, i);
        runs.push_back(with_model(base, DutModel::none));
        for (DutModel m : {DutModel::cbr, DutModel::vbr})
        {
            Scenario no_twt = with_model(base, m);
            no_twt.stations[static_cast<std::size_t>(dut)].twt.reset();
            runs.push_back(no_twt);
            runs.push_back(with_model(base, m));
        }
    }
    const auto out = evaluate_sessions(runs, interval_s);
    std::vector<Table3Row> rows;
    for (const char* model : {"CBR", "VBR"})
    {
        const std::size_t k = std::string(model) == "CBR" ? 1 : 3;
        for (int i = 0; i < iterations; ++i)
        {
            const std::size_t base = static_cast<std::size_t>(i) * 5;
            rows.push_back({model, i + 1, out[base].background_mbps, out[base + k].background_mbps,
                            out[base + k + 1].background_mbps});
        }
    }
    return rows;
}

std::vector<QosCell> table4(const Scenario& tmpl, const std::vector<double>& duties, std::uint64_t master,
                            int iterations, double interval_s)
{
    const int sta = dut_station_of(tmpl);
    const auto& tw = tmpl.stations[static_cast<std::size_t>(sta)].twt;
    const int mf = tw ? tw->mf : 1;
    std::vector<Scenario> runs;
    std::vector<std::string> labels;
    for (double d : duties)
        for (int i = 0; i < iterations; ++i)
        {
            Scenario sc = with_model(with_schedule(tmpl, d, mf), DutModel::cbr);
            sc.seed = iteration_seed(master, i);
            runs.push_back(sc);
            labels.push_back(fmt_real(d) + "% MF " + std::to_string(mf));
        }
    const auto out = evaluate_sessions(runs, interval_s);
    std::vector<QosCell> cells;
    for (std::size_t k = 0; k < out.size(); ++k)
        cells.push_back({labels[k], static_cast<int>(k) % iterations + 1, out[k].qos.avg_throughput_mbps,
                         out[k].qos.underrun_events, out[k].qos.underrun_time_s});
    return cells;
}

std::vector<QosCell> table5(const Scenario& tmpl, std::uint64_t master, int iterations, double interval_s)
{
    std::vector<Scenario> runs;
    std::vector<std::string> labels;
    for (DutModel m : {DutModel::cbr, DutModel::vbr})
        for (int i = 0; i < iterations; ++i)
        {
            Scenario sc = with_model(tmpl, m);
            sc.seed = iteration_seed(master, i);
            runs.push_back(sc);
            labels.push_back(m == DutModel::cbr ? "CBR" : "VBR");
        }
    const auto out = evaluate_sessions(runs, interval_s);
    std::vector<QosCell> cells;
    for (std::size_t k = 0; k < out.size(); ++k)
        cells.push_back({labels[k], static_cast<int>(k) % iterations + 1, out[k].qos.avg_throughput_mbps,
                         out[k].qos.underrun_events, out[k].qos.underrun_time_s});
    return cells;
}

void write_table3_csv(std::ostream& out, const std::vector<Table3Row>& rows)
{
    out << "model,iteration,no_dut_mbps,dut_without_twt_mbps,dut_with_twt_mbps\n";
    for (const auto& r : rows)
        out << r.model << ',' << r.iteration << ',' << fmt_real(r.no_dut_mbps) << ','
            << fmt_real(r.dut_without_twt_mbps) << ',' << fmt_real(r.dut_with_twt_mbps) << '\n';
}

void write_qos_cells_csv(std::ostream& out, const std::vector<QosCell>& cells)
{
    out << "config,iteration,qos1_mbps,qos2_underrun_events,underrun_time_s\n";
    for (const auto& c : cells)
        out << c.label << ',' << c.iteration << ',' << fmt_real(c.qos1_mbps) << ',' << c.qos2_underruns << ','
            << fmt_real(c.underrun_time_s) << '\n';
}

}  // namespace twtsim::experiments
