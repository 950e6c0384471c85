#ifndef CTOPT_HARNESS_HPP
#define CTOPT_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ctopt/config.hpp"
#include "ctopt/esc.hpp"
#include "ctopt/metrics.hpp"
#include "ctopt/sysid.hpp"
#include "ctopt/weather.hpp"

namespace ctopt {

// One recorded simulation step. fan_cmd_pct is the controller output issued
// at this step (the ESC's manipulated variable x); the plant temperatures
// reflect the command issued one step earlier.
struct RunRow {
    double t_s;
    double t_db_c;
    double t_wb_c;
    double fan_cmd_pct;
    double t_cws_c;
    double t_cwr_c;
    double t_chwr_c;
    double plr;
    double p_chiller_kw;
    double p_tower_kw;
    double p_cw_pump_kw;
    double p_chw_pump_kw;
    double p_ahu_kw;
    double p_total_kw;
    int relay_sign;        // 0 for non-ESC controllers
    double j_filtered_kw;  // filtered cost for ESC, raw cost otherwise
    double p_chiller_vpm;
    double p_fan_vpm;
};

struct RunSummary {
    std::string scenario;
    std::string controller;
    std::uint64_t seed = 0;
    double dt_s = 0.0;
    double duration_s = 0.0;
    std::size_t n_steps = 0;
    double kwh_chiller = 0.0;
    double kwh_tower = 0.0;
    double kwh_cw_pump = 0.0;
    double kwh_chw_pump = 0.0;
    double kwh_ahu = 0.0;
    double kwh_total = 0.0;
    double kwh_total_vpm = 0.0;  // chiller+fan meters plus constant loads
    double plr_min = 0.0;
    double plr_max = 0.0;
    // ESC-only tuning echo, used by the run validator's dwell check.
    std::optional<double> dwell_limit_s;
    std::optional<double> k_gain_pct;
    std::optional<double> x_min_pct;
    std::optional<double> x_max_pct;
    std::optional<MetricsReport> vpm_vs_truth;  // chiller meter vs plant
};

struct RunRecord {
    std::vector<RunRow> rows;
    RunSummary summary;
};

struct SweepPoint {
    double speed_pct = 0.0;
    double kwh_total = 0.0;
    double kwh_chiller = 0.0;
    double kwh_tower = 0.0;
    double kwh_cw_pump = 0.0;
    double kwh_chw_pump = 0.0;
    double kwh_ahu = 0.0;
    double kwh_total_vpm = 0.0;
};

struct CompareReport {
    std::string scenario;
    std::uint64_t seed = 0;
    double kwh_esc = 0.0;
    double kwh_fixed100 = 0.0;
    double kwh_pid = 0.0;
    double esc_vs_fixed_pct = 0.0;  // weekly savings of ESC vs fixed 100%
    double esc_vs_pid_pct = 0.0;
    std::vector<double> daily_esc_kwh;
    std::vector<double> daily_fixed_kwh;
    std::vector<double> daily_pid_kwh;
    SavingsStats daily_vs_fixed;
    SavingsStats daily_vs_pid;
};

struct VpmValidationReport {
    MetricsReport metrics;        // corrected estimate vs plant truth
    MetricsReport metrics_raw;    // before correction
    double correction_factor = 1.0;
    double flow_error_pct = 0.0;
    std::size_t smooth_window = 1;
    // Histogram of (estimate - truth) differences, kW.
    std::vector<double> hist_bin_low_kw;
    std::vector<double> hist_bin_high_kw;
    std::vector<std::size_t> hist_count;
};

// Closed-loop driver: weather -> plant step with the previous command ->
// cost assembly -> controller step -> record. Deterministic for a given
// scenario and seed.
RunRecord run_scenario(const Scenario& scenario);
RunRecord run_scenario(const Scenario& scenario, const WeatherSeries& weather);

// One fixed-speed run per listed speed over identical weather and seed.
// Output sorted by speed. jobs > 1 distributes runs across OpenMP threads;
// results are identical for any jobs value.
std::vector<SweepPoint> run_sweep(const Scenario& scenario,
                                  std::vector<double> speeds_pct, int jobs);

// ESC vs fixed-100% vs idealized PID on identical weather and seed, with
// weekly savings and per-day savings statistics.
CompareReport compare_controllers(const Scenario& scenario, int jobs);

// Degraded-sensor VPM against the plant's own chiller power: mis-specified
// assumed flow, optional noise from the scenario, least-squares correction
// fitted on the first half of the trace, metrics over the whole trace.
VpmValidationReport vpm_validate(const Scenario& scenario, double flow_error_pct,
                                 std::size_t smooth_window, bool apply_correction);

// ---- persistence ----

// Fixed column order, full-precision decimals; byte-stable for golden tests.
void write_run_csv(const std::filesystem::path& path, const RunRecord& record);
void write_summary_json(const std::filesystem::path& path, const RunSummary& summary);
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepPoint>& points);
void write_compare_json(const std::filesystem::path& path, const CompareReport& report);
void write_impulse_csv(const std::filesystem::path& path,
                       const std::vector<ImpulseTracePoint>& trace);
void write_vpm_report(const std::filesystem::path& metrics_path,
                      const std::filesystem::path& histogram_path,
                      const VpmValidationReport& report);

// Post-hoc validation of a run CSV: per-row power bookkeeping, command and
// relay ranges, wet-bulb floor; with the sidecar summary also row count and
// the relay dwell contract. Returns human-readable violations (empty = ok).
std::vector<std::string> validate_run_csv(const std::filesystem::path& csv_path,
                                          const std::optional<std::filesystem::path>& summary_path);

// Daily kWh totals (duration must cover whole days for the trailing days to
// count; partial trailing days are dropped).
std::vector<double> daily_energy_kwh(const std::vector<RunRow>& rows, double dt_s);

} // namespace ctopt

#endif // CTOPT_HARNESS_HPP
