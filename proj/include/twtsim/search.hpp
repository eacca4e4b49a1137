#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "twtsim/experiments.hpp"
#include "twtsim/qos.hpp"
#include "twtsim/scenario.hpp"
#include "twtsim/twt.hpp"

namespace twtsim::search {

struct SearchSettings
{
    int seeds = 5;
    std::uint64_t master_seed = 1;
    double phase1_duration_s = 20.0;
    double duty_step_pct = 5.0;
    double interval_s = 1.0;
    int max_underruns = 3;
    int max_mf = 64;
    std::vector<double> table4_duties{25.0, 30.0};

    void validate() const;
};

/// Target throughput cannot be met even when the DUT never sleeps.
class InfeasibleTarget : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct DutyPoint
{
    double duty_pct = 0.0;
    double mean_mbps = 0.0;
    double std_mbps = 0.0;
    std::vector<double> per_seed_mbps;
};

struct MfPoint
{
    int mf = 1;
    twt::TwtSchedule schedule;
    double mean_underrun_time_s = 0.0;
    double std_underrun_time_s = 0.0;
    double mean_underrun_events = 0.0;
    double mean_throughput_variation = 0.0;  // diagnostic only
};

struct SessionRecord
{
    std::string model;
    double duty_pct = 0.0;
    int mf = 1;
    int iteration = 0;
    std::uint64_t seed = 0;
    qos::QosReport report;
    double offered_mbps = 0.0;
    bool pass = false;
};

struct Phase1Result
{
    double duty_pct = 0.0;
    std::vector<DutyPoint> curve;
};

struct Phase2Result
{
    int mf = 1;
    std::vector<MfPoint> curve;
};

struct Phase3Result
{
    double duty_pct = 0.0;
    int mf = 1;
    twt::TwtSchedule schedule;
    bool converged = false;
    bool vbr_pass = false;
    std::vector<SessionRecord> sessions;  // every CBR attempt, then the VBR check
};

struct SearchResult
{
    double duty_percent = 0.0;
    int mf = 1;
    twt::TwtSchedule schedule;
    std::vector<DutyPoint> phase1_curve;
    std::vector<MfPoint> phase2_curve;
    std::vector<SessionRecord> phase3_sessions;
    std::vector<qos::QosReport> phase3_reports;  // CBR attempts only
    double phase1_duty_pct = 0.0;
    bool converged = false;
    bool vbr_pass = false;
};

/// Mean single-stream throughput (local saturated flow, no background) at
/// every duty on the grid, MF 1.
std::vector<DutyPoint> duty_sweep(const Scenario& tmpl, const SearchSettings& settings);

/// Smallest grid duty whose seed-averaged throughput reaches the target.
/// Throws InfeasibleTarget when 100 % duty falls short.
Phase1Result phase1_min_duty(const Scenario& tmpl, double target_mbps, const SearchSettings& settings);

/// One MF point: CBR stream under the template's background load.
MfPoint evaluate_mf(const Scenario& tmpl, double duty_pct, int mf, const SearchSettings& settings);

/// MF values 1, 2, 4, ... up to max_mf that still yield a valid schedule.
std::vector<int> mf_grid(double duty_pct, int max_mf);

/// The MF preceding the first point whose underrun time fails to strictly
/// improve on its predecessor; the last point if all improve.
int select_mf(const std::vector<MfPoint>& curve);

/// Doubles MF while seed-averaged underrun time strictly improves.
Phase2Result phase2_select_mf(const Scenario& tmpl, double duty_pct, const SearchSettings& settings);

/// Full MF curve without early stopping.
std::vector<MfPoint> mf_sweep(const Scenario& tmpl, double duty_pct, const SearchSettings& settings);

/// Sessions of one model under (duty, mf); pass flags use qos_pass against
/// the nominal bitrate for CBR and the session's offered load for VBR.
std::vector<SessionRecord> validate_schedule(const Scenario& tmpl, double duty_pct, int mf, DutModel model,
                                             const SearchSettings& settings);

/// Raises duty in steps until every CBR session passes, then checks VBR with
/// the same schedule.
Phase3Result phase3_validate(const Scenario& tmpl, double duty_pct, int mf, const SearchSettings& settings);

SearchResult run_search(const Scenario& tmpl, const SearchSettings& settings);

nlohmann::json to_json(const SearchResult& r);

void write_phase1_csv(std::ostream& out, const std::vector<DutyPoint>& curve);
void write_phase2_csv(std::ostream& out, const std::vector<MfPoint>& curve);
void write_sessions_csv(std::ostream& out, const std::vector<SessionRecord>& sessions);

}  // namespace twtsim::search
