#include "ctopt/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "ctopt/baseline.hpp"
#include "ctopt/csv.hpp"
#include "ctopt/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ctopt {

using json = nlohmann::ordered_json;

namespace {

constexpr char kRunHeader[] =
    "t_s,t_db_c,t_wb_c,fan_cmd_pct,t_cws_c,t_cwr_c,t_chwr_c,plr,"
    "p_chiller_kw,p_tower_kw,p_cw_pump_kw,p_chw_pump_kw,p_ahu_kw,p_total_kw,"
    "relay_sign,j_filtered_kw,p_chiller_vpm,p_fan_vpm";

double constant_loads_kw(const PlantConfig& cfg) {
    return cfg.p_cw_pump_kw + cfg.p_chw_pump_kw + cfg.p_ahu_kw;
}

} // namespace

RunRecord run_scenario(const Scenario& scenario) {
    const WeatherSeries weather = load_weather(scenario.weather_path);
    return run_scenario(scenario, weather);
}

RunRecord run_scenario(const Scenario& scenario, const WeatherSeries& weather) {
    const double dt = scenario.dt_s;
    const auto n_steps = static_cast<std::size_t>(scenario.duration_s / dt);
    if (n_steps == 0) {
        throw config_error("scenario '" + scenario.name + "': duration shorter than dt");
    }
    if (weather.start_s() > 0.0 || weather.end_s() < scenario.duration_s) {
        throw config_error("scenario '" + scenario.name +
                           "': weather does not cover [0, " +
                           std::to_string(scenario.duration_s) + "] s");
    }

    const PlantConfig& plant = scenario.plant;

    EscConfig esc_cfg;
    EscState esc_state;
    double fan_cmd = 0.0;
    const WeatherSample w0 = weather.sample_at(0.0);

    switch (scenario.controller) {
        case ControllerKind::esc:
            esc_cfg = configure_esc(scenario.esc.tau_s, scenario.esc.tau_f_s, dt,
                                    scenario.esc.x_min_pct, scenario.esc.x_max_pct);
            esc_state = make_initial_esc_state(esc_cfg);
            fan_cmd = esc_state.x_pct;
            break;
        case ControllerKind::fixed:
            fan_cmd = fixed_step(scenario.fixed);
            break;
        case ControllerKind::pid:
            fan_cmd = 0.0;  // replaced from the initial state below
            break;
    }

    PlantState state = make_initial_state(plant, w0, fan_cmd);
    if (scenario.controller == ControllerKind::pid) {
        fan_cmd = ideal_pid_step(scenario.pid, state, w0, plant);
    }

    RunRecord record;
    record.rows.reserve(n_steps);

    std::vector<double> true_chiller;
    std::vector<double> vpm_chiller;
    true_chiller.reserve(n_steps);
    vpm_chiller.reserve(n_steps);

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        const WeatherSample w = weather.sample_at(t);

        try {
            state = plant_step(state, fan_cmd, w, dt, plant);
        } catch (const model_error& e) {
            throw model_error("step " + std::to_string(i) + ": " + e.what());
        }

        SensorFrame frame;
        frame.t_evap_e_c = state.t_chwr_c;
        frame.t_evap_l_c = plant.t_chws_setpoint_c;
        frame.t_cond_e_c = state.t_cws_c;
        frame.m_chw_kg_s = plant.m_chw_kg_s;
        frame.flow_valid = scenario.vpm_flow_sensor_present;
        frame.fan_speed_pct = state.fan_speed_pct;
        frame.timestamp_s = t;
        if (scenario.noise) {
            NoiseRng rng = noise_stream(scenario.noise->seed, i);
            frame = inject_noise(frame, *scenario.noise, rng);
            // Noisy sensor pairs can momentarily invert; the meter reads a
            // zero split (load clamps at its floor) instead of a heating
            // direction, which would indicate genuinely mis-wired sensors.
            frame.t_evap_e_c = std::max(frame.t_evap_e_c, frame.t_evap_l_c);
        }

        double p_chiller_vpm = 0.0;
        double p_fan_vpm = 0.0;
        try {
            p_chiller_vpm = vpm_chiller_power(frame, scenario.vpm);
            p_fan_vpm = vpm_fan_power(frame, scenario.vpm);
        } catch (const model_error& e) {
            throw model_error("step " + std::to_string(i) + " (vpm): " + e.what());
        }

        const double j_true = state.powers.p_total_kw;
        const double j_vpm = p_chiller_vpm + p_fan_vpm + constant_loads_kw(plant);
        const double j = scenario.cost_source == CostSource::vpm ? j_vpm : j_true;

        int relay_sign = 0;
        double j_filtered = j;
        switch (scenario.controller) {
            case ControllerKind::esc: {
                EscStepResult r = esc_step(esc_cfg, esc_state, j);
                esc_state = r.state;
                fan_cmd = r.x_command_pct;
                relay_sign = esc_state.relay_sign;
                j_filtered = esc_state.j_filtered_kw;
                break;
            }
            case ControllerKind::fixed:
                fan_cmd = fixed_step(scenario.fixed);
                break;
            case ControllerKind::pid:
                fan_cmd = ideal_pid_step(scenario.pid, state, w, plant);
                break;
        }

        RunRow row;
        row.t_s = t;
        row.t_db_c = w.t_db_c;
        row.t_wb_c = w.t_wb_c;
        row.fan_cmd_pct = fan_cmd;
        row.t_cws_c = state.t_cws_c;
        row.t_cwr_c = state.t_cwr_c;
        row.t_chwr_c = state.t_chwr_c;
        row.plr = state.plr;
        row.p_chiller_kw = state.powers.p_chiller_kw;
        row.p_tower_kw = state.powers.p_tower_kw;
        row.p_cw_pump_kw = state.powers.p_cw_pump_kw;
        row.p_chw_pump_kw = state.powers.p_chw_pump_kw;
        row.p_ahu_kw = state.powers.p_ahu_kw;
        row.p_total_kw = state.powers.p_total_kw;
        row.relay_sign = relay_sign;
        row.j_filtered_kw = j_filtered;
        row.p_chiller_vpm = p_chiller_vpm;
        row.p_fan_vpm = p_fan_vpm;
        record.rows.push_back(row);

        true_chiller.push_back(state.powers.p_chiller_kw);
        vpm_chiller.push_back(p_chiller_vpm);
    }

    RunSummary& s = record.summary;
    s.scenario = scenario.name;
    s.controller = to_string(scenario.controller);
    s.seed = scenario.seed;
    s.dt_s = dt;
    s.duration_s = scenario.duration_s;
    s.n_steps = n_steps;
    s.plr_min = plant.plr_min;
    s.plr_max = plant.plr_max;

    std::vector<double> column(n_steps);
    const auto integrate = [&](auto field) {
        for (std::size_t i = 0; i < n_steps; ++i) column[i] = record.rows[i].*field;
        return integrate_energy_kwh(column, dt);
    };
    s.kwh_chiller = integrate(&RunRow::p_chiller_kw);
    s.kwh_tower = integrate(&RunRow::p_tower_kw);
    s.kwh_cw_pump = integrate(&RunRow::p_cw_pump_kw);
    s.kwh_chw_pump = integrate(&RunRow::p_chw_pump_kw);
    s.kwh_ahu = integrate(&RunRow::p_ahu_kw);
    s.kwh_total = integrate(&RunRow::p_total_kw);

    for (std::size_t i = 0; i < n_steps; ++i) {
        column[i] = record.rows[i].p_chiller_vpm + record.rows[i].p_fan_vpm +
                    constant_loads_kw(plant);
    }
    s.kwh_total_vpm = integrate_energy_kwh(column, dt);

    if (scenario.controller == ControllerKind::esc) {
        s.dwell_limit_s = esc_cfg.dwell_limit_s;
        s.k_gain_pct = esc_cfg.k_gain_pct;
        s.x_min_pct = esc_cfg.x_min_pct;
        s.x_max_pct = esc_cfg.x_max_pct;
    }

    // Meter-vs-truth metrics are only meaningful when the chiller power
    // actually varies over the run.
    const auto [mn, mx] = std::minmax_element(true_chiller.begin(), true_chiller.end());
    if (*mx - *mn > 0.0) {
        s.vpm_vs_truth = compute_metrics(true_chiller, vpm_chiller);
    }
    return record;
}

std::vector<double> daily_energy_kwh(const std::vector<RunRow>& rows, double dt_s) {
    const auto steps_per_day = static_cast<std::size_t>(86400.0 / dt_s);
    if (steps_per_day == 0) {
        throw model_error("daily_energy: dt exceeds one day");
    }
    const std::size_t n_days = rows.size() / steps_per_day;
    std::vector<double> out;
    out.reserve(n_days);
    std::vector<double> day(steps_per_day);
    for (std::size_t d = 0; d < n_days; ++d) {
        for (std::size_t i = 0; i < steps_per_day; ++i) {
            day[i] = rows[d * steps_per_day + i].p_total_kw;
        }
        out.push_back(integrate_energy_kwh(day, dt_s));
    }
    return out;
}

// ---- sweep / compare ----

namespace {

// Run a batch of independent scenarios. jobs == 1 is the plain serial
// reference path; larger values fan the runs out across OpenMP threads.
// Results land in input order either way.
template <typename Fn>
void run_batch(std::size_t count, int jobs, Fn&& body) {
#ifdef _OPENMP
    if (jobs > 1) {
        std::string first_error;
#pragma omp parallel for num_threads(jobs) schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (const std::exception& e) {
#pragma omp critical
                if (first_error.empty()) first_error = e.what();
            }
        }
        if (!first_error.empty()) {
            throw model_error(first_error);
        }
        return;
    }
#else
    (void)jobs;
#endif
    for (std::size_t i = 0; i < count; ++i) {
        body(i);
    }
}

} // namespace

std::vector<SweepPoint> run_sweep(const Scenario& scenario,
                                  std::vector<double> speeds_pct, int jobs) {
    if (speeds_pct.empty()) {
        throw config_error("sweep: speed list is empty");
    }
    for (double s : speeds_pct) {
        if (!(s >= 0.0 && s <= 100.0)) {
            throw config_error("sweep: speed " + std::to_string(s) +
                               " outside [0, 100] %");
        }
    }
    std::sort(speeds_pct.begin(), speeds_pct.end());

    const WeatherSeries weather = load_weather(scenario.weather_path);
    std::vector<SweepPoint> points(speeds_pct.size());

    run_batch(speeds_pct.size(), jobs, [&](std::size_t i) {
        Scenario fixed_run = scenario;
        fixed_run.controller = ControllerKind::fixed;
        fixed_run.fixed.speed_pct = speeds_pct[i];
        const RunRecord rec = run_scenario(fixed_run, weather);
        SweepPoint& p = points[i];
        p.speed_pct = speeds_pct[i];
        p.kwh_total = rec.summary.kwh_total;
        p.kwh_chiller = rec.summary.kwh_chiller;
        p.kwh_tower = rec.summary.kwh_tower;
        p.kwh_cw_pump = rec.summary.kwh_cw_pump;
        p.kwh_chw_pump = rec.summary.kwh_chw_pump;
        p.kwh_ahu = rec.summary.kwh_ahu;
        p.kwh_total_vpm = rec.summary.kwh_total_vpm;
    });
    return points;
}

CompareReport compare_controllers(const Scenario& scenario, int jobs) {
    const WeatherSeries weather = load_weather(scenario.weather_path);

    Scenario variants[3] = {scenario, scenario, scenario};
    variants[0].controller = ControllerKind::esc;
    variants[1].controller = ControllerKind::fixed;
    variants[1].fixed.speed_pct = 100.0;
    variants[2].controller = ControllerKind::pid;

    RunRecord records[3];
    run_batch(3, std::min(jobs, 3), [&](std::size_t i) {
        records[i] = run_scenario(variants[i], weather);
    });

    CompareReport rep;
    rep.scenario = scenario.name;
    rep.seed = scenario.seed;
    rep.kwh_esc = records[0].summary.kwh_total;
    rep.kwh_fixed100 = records[1].summary.kwh_total;
    rep.kwh_pid = records[2].summary.kwh_total;
    rep.esc_vs_fixed_pct = 100.0 * (rep.kwh_fixed100 - rep.kwh_esc) / rep.kwh_fixed100;
    rep.esc_vs_pid_pct = 100.0 * (rep.kwh_pid - rep.kwh_esc) / rep.kwh_pid;
    rep.daily_esc_kwh = daily_energy_kwh(records[0].rows, scenario.dt_s);
    rep.daily_fixed_kwh = daily_energy_kwh(records[1].rows, scenario.dt_s);
    rep.daily_pid_kwh = daily_energy_kwh(records[2].rows, scenario.dt_s);
    if (rep.daily_esc_kwh.size() >= 2) {
        rep.daily_vs_fixed = daily_savings_stats(rep.daily_fixed_kwh, rep.daily_esc_kwh);
        rep.daily_vs_pid = daily_savings_stats(rep.daily_pid_kwh, rep.daily_esc_kwh);
    }
    return rep;
}

// ---- degraded-sensor VPM validation ----

VpmValidationReport vpm_validate(const Scenario& scenario, double flow_error_pct,
                                 std::size_t smooth_window, bool apply_correction) {
    Scenario degraded = scenario;
    degraded.vpm_flow_sensor_present = false;
    degraded.vpm.assumed_flow_kg_s =
        scenario.plant.m_chw_kg_s * (1.0 + flow_error_pct / 100.0);
    degraded.vpm.correction_factor = 1.0;
    if (!(degraded.vpm.assumed_flow_kg_s > 0.0)) {
        throw config_error("vpm_validate: flow error leaves no positive flow");
    }

    const RunRecord rec = run_scenario(degraded);

    std::vector<double> truth(rec.rows.size());
    std::vector<double> raw(rec.rows.size());
    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        truth[i] = rec.rows[i].p_chiller_kw;
        raw[i] = rec.rows[i].p_chiller_vpm;
    }
    if (smooth_window > 1) {
        raw = smooth_series(raw, smooth_window);
        truth = smooth_series(truth, smooth_window);
    }

    VpmValidationReport rep;
    rep.flow_error_pct = flow_error_pct;
    rep.smooth_window = smooth_window;
    rep.metrics_raw = compute_metrics(truth, raw);

    // Correction factor is fitted on the first half of the trace and applied
    // throughout; the estimate series never sees the truth beyond that window.
    rep.correction_factor = 1.0;
    if (apply_correction) {
        const std::size_t train = std::max<std::size_t>(1, raw.size() / 2);
        const std::vector<double> e_train(raw.begin(), raw.begin() + train);
        const std::vector<double> m_train(truth.begin(), truth.begin() + train);
        rep.correction_factor = calibrate_correction_factor(e_train, m_train);
    }

    std::vector<double> corrected(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        corrected[i] = rep.correction_factor * raw[i];
    }
    rep.metrics = compute_metrics(truth, corrected);

    // Difference histogram over 21 equal-width bins.
    std::vector<double> diff(corrected.size());
    for (std::size_t i = 0; i < corrected.size(); ++i) {
        diff[i] = corrected[i] - truth[i];
    }
    const auto [dmin_it, dmax_it] = std::minmax_element(diff.begin(), diff.end());
    const double dmin = *dmin_it;
    const double dmax = *dmax_it;
    const std::size_t n_bins = 21;
    const double width = dmax > dmin ? (dmax - dmin) / static_cast<double>(n_bins) : 1.0;
    rep.hist_bin_low_kw.resize(n_bins);
    rep.hist_bin_high_kw.resize(n_bins);
    rep.hist_count.assign(n_bins, 0);
    for (std::size_t b = 0; b < n_bins; ++b) {
        rep.hist_bin_low_kw[b] = dmin + static_cast<double>(b) * width;
        rep.hist_bin_high_kw[b] = dmin + static_cast<double>(b + 1) * width;
    }
    for (double d : diff) {
        auto b = static_cast<std::size_t>((d - dmin) / width);
        if (b >= n_bins) b = n_bins - 1;
        ++rep.hist_count[b];
    }
    return rep;
}

// ---- persistence ----

void write_run_csv(const std::filesystem::path& path, const RunRecord& record) {
    std::ofstream out(path);
    if (!out) {
        throw model_error("cannot write " + path.string());
    }
    out << kRunHeader << '\n';
    for (const RunRow& r : record.rows) {
        out << fmt_double(r.t_s) << ',' << fmt_double(r.t_db_c) << ','
            << fmt_double(r.t_wb_c) << ',' << fmt_double(r.fan_cmd_pct) << ','
            << fmt_double(r.t_cws_c) << ',' << fmt_double(r.t_cwr_c) << ','
            << fmt_double(r.t_chwr_c) << ',' << fmt_double(r.plr) << ','
            << fmt_double(r.p_chiller_kw) << ',' << fmt_double(r.p_tower_kw) << ','
            << fmt_double(r.p_cw_pump_kw) << ',' << fmt_double(r.p_chw_pump_kw) << ','
            << fmt_double(r.p_ahu_kw) << ',' << fmt_double(r.p_total_kw) << ','
            << r.relay_sign << ',' << fmt_double(r.j_filtered_kw) << ','
            << fmt_double(r.p_chiller_vpm) << ',' << fmt_double(r.p_fan_vpm) << '\n';
    }
}

namespace {

json summary_to_json(const RunSummary& s) {
    json j;
    j["scenario"] = s.scenario;
    j["controller"] = s.controller;
    j["seed"] = s.seed;
    j["dt_s"] = s.dt_s;
    j["duration_s"] = s.duration_s;
    j["n_steps"] = s.n_steps;
    j["plr_min"] = s.plr_min;
    j["plr_max"] = s.plr_max;
    j["energy_kwh"] = {{"chiller", s.kwh_chiller},
                       {"tower", s.kwh_tower},
                       {"cw_pump", s.kwh_cw_pump},
                       {"chw_pump", s.kwh_chw_pump},
                       {"ahu", s.kwh_ahu},
                       {"total", s.kwh_total},
                       {"total_vpm", s.kwh_total_vpm}};
    if (s.dwell_limit_s) {
        j["esc"] = {{"dwell_limit_s", *s.dwell_limit_s},
                    {"k_gain_pct", *s.k_gain_pct},
                    {"x_min_pct", *s.x_min_pct},
                    {"x_max_pct", *s.x_max_pct}};
    }
    if (s.vpm_vs_truth) {
        j["vpm_vs_truth"] = {{"r2", s.vpm_vs_truth->r2},
                             {"rmse_kw", s.vpm_vs_truth->rmse},
                             {"nrmse", s.vpm_vs_truth->nrmse},
                             {"n", s.vpm_vs_truth->n}};
    }
    return j;
}

} // namespace

void write_summary_json(const std::filesystem::path& path, const RunSummary& summary) {
    std::ofstream out(path);
    if (!out) {
        throw model_error("cannot write " + path.string());
    }
    out << summary_to_json(summary).dump(2) << '\n';
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepPoint>& points) {
    std::ofstream out(path);
    if (!out) {
        throw model_error("cannot write " + path.string());
    }
    out << "speed_pct,kwh_total,kwh_chiller,kwh_tower,kwh_cw_pump,kwh_chw_pump,"
           "kwh_ahu,kwh_total_vpm\n";
    for (const SweepPoint& p : points) {
        out << fmt_double(p.speed_pct) << ',' << fmt_double(p.kwh_total) << ','
            << fmt_double(p.kwh_chiller) << ',' << fmt_double(p.kwh_tower) << ','
            << fmt_double(p.kwh_cw_pump) << ',' << fmt_double(p.kwh_chw_pump) << ','
            << fmt_double(p.kwh_ahu) << ',' << fmt_double(p.kwh_total_vpm) << '\n';
    }
}

void write_compare_json(const std::filesystem::path& path, const CompareReport& rep) {
    std::ofstream out(path);
    if (!out) {
        throw model_error("cannot write " + path.string());
    }
    const auto stats_json = [](const SavingsStats& s) {
        return json{{"mean_pct", s.mean_pct},
                    {"std_pct", s.std_pct},
                    {"ci95_low_pct", s.ci95_low_pct},
                    {"ci95_high_pct", s.ci95_high_pct},
                    {"n_days", s.n_days}};
    };
    json j;
    j["scenario"] = rep.scenario;
    j["seed"] = rep.seed;
    j["energy_kwh"] = {{"esc", rep.kwh_esc},
                       {"fixed_100", rep.kwh_fixed100},
                       {"pid", rep.kwh_pid}};
    j["savings_pct"] = {{"esc_vs_fixed", rep.esc_vs_fixed_pct},
                        {"esc_vs_pid", rep.esc_vs_pid_pct}};
    j["daily_kwh"] = {{"esc", rep.daily_esc_kwh},
                      {"fixed_100", rep.daily_fixed_kwh},
                      {"pid", rep.daily_pid_kwh}};
    j["daily_savings_vs_fixed"] = stats_json(rep.daily_vs_fixed);
    j["daily_savings_vs_pid"] = stats_json(rep.daily_vs_pid);
    out << j.dump(2) << '\n';
}

void write_impulse_csv(const std::filesystem::path& path,
                       const std::vector<ImpulseTracePoint>& trace) {
    std::ofstream out(path);
    if (!out) {
        throw model_error("cannot write " + path.string());
    }
    out << "t_s,fan_speed_pct,p_total_kw\n";
    for (const ImpulseTracePoint& p : trace) {
        out << fmt_double(p.t_s) << ',' << fmt_double(p.fan_speed_pct) << ','
            << fmt_double(p.p_total_kw) << '\n';
    }
}

void write_vpm_report(const std::filesystem::path& metrics_path,
                      const std::filesystem::path& histogram_path,
                      const VpmValidationReport& rep) {
    {
        std::ofstream out(metrics_path);
        if (!out) {
            throw model_error("cannot write " + metrics_path.string());
        }
        json j;
        j["flow_error_pct"] = rep.flow_error_pct;
        j["smooth_window"] = rep.smooth_window;
        j["correction_factor"] = rep.correction_factor;
        j["raw"] = {{"r2", rep.metrics_raw.r2},
                    {"rmse_kw", rep.metrics_raw.rmse},
                    {"nrmse", rep.metrics_raw.nrmse},
                    {"n", rep.metrics_raw.n}};
        j["corrected"] = {{"r2", rep.metrics.r2},
                          {"rmse_kw", rep.metrics.rmse},
                          {"nrmse", rep.metrics.nrmse},
                          {"n", rep.metrics.n}};
        out << j.dump(2) << '\n';
    }
    {
        std::ofstream out(histogram_path);
        if (!out) {
            throw model_error("cannot write " + histogram_path.string());
        }
        out << "bin_low_kw,bin_high_kw,count\n";
        for (std::size_t b = 0; b < rep.hist_count.size(); ++b) {
            out << fmt_double(rep.hist_bin_low_kw[b]) << ','
                << fmt_double(rep.hist_bin_high_kw[b]) << ',' << rep.hist_count[b]
                << '\n';
        }
    }
}

// ---- run validation ----

namespace {

double parse_double_or_throw(const std::string& text, const std::string& what,
                             std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw config_error("run csv line " + std::to_string(line) +
                           ": malformed " + what + " '" + text + "'");
    }
    return v;
}

} // namespace

std::vector<std::string> validate_run_csv(
    const std::filesystem::path& csv_path,
    const std::optional<std::filesystem::path>& summary_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw config_error("run csv not found: " + csv_path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw config_error("run csv is empty: " + csv_path.string());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRunHeader) {
        throw config_error("run csv " + csv_path.string() + ": unexpected header");
    }

    std::vector<std::string> violations;
    const auto flag = [&violations](std::size_t line_no, const std::string& msg) {
        violations.push_back("line " + std::to_string(line_no) + ": " + msg);
    };

    std::size_t line_no = 1;
    std::size_t n_rows = 0;
    int prev_relay = 0;
    double prev_switch_t = 0.0;
    bool have_switch_base = false;
    double min_interval = std::numeric_limits<double>::infinity();
    double fan_min = std::numeric_limits<double>::infinity();
    double fan_max = -std::numeric_limits<double>::infinity();

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 18) {
            throw config_error("run csv line " + std::to_string(line_no) +
                               ": expected 18 fields, got " + std::to_string(f.size()));
        }
        ++n_rows;

        const double t = parse_double_or_throw(f[0], "t_s", line_no);
        const double t_wb = parse_double_or_throw(f[2], "t_wb_c", line_no);
        const double fan = parse_double_or_throw(f[3], "fan_cmd_pct", line_no);
        const double t_cws = parse_double_or_throw(f[4], "t_cws_c", line_no);
        const double parts[5] = {parse_double_or_throw(f[8], "p_chiller_kw", line_no),
                                 parse_double_or_throw(f[9], "p_tower_kw", line_no),
                                 parse_double_or_throw(f[10], "p_cw_pump_kw", line_no),
                                 parse_double_or_throw(f[11], "p_chw_pump_kw", line_no),
                                 parse_double_or_throw(f[12], "p_ahu_kw", line_no)};
        const double total = parse_double_or_throw(f[13], "p_total_kw", line_no);
        const double relay = parse_double_or_throw(f[14], "relay_sign", line_no);

        double sum = 0.0;
        for (double p : parts) {
            sum += p;
            if (p < 0.0) flag(line_no, "negative component power");
        }
        if (std::abs(sum - total) > 1e-12) {
            flag(line_no, "p_total_kw off by " + fmt_double(sum - total) + " kW");
        }
        if (!(fan >= 0.0 && fan <= 100.0)) {
            flag(line_no, "fan command outside [0, 100] %");
        }
        fan_min = std::min(fan_min, fan);
        fan_max = std::max(fan_max, fan);
        if (relay != 0.0 && relay != 1.0 && relay != -1.0) {
            flag(line_no, "relay_sign outside {-1, 0, +1}");
        }
        if (t_cws < t_wb - 1e-9) {
            flag(line_no, "t_cws below wet bulb");
        }

        const int r = static_cast<int>(relay);
        if (r != 0) {
            if (prev_relay != 0 && r != prev_relay) {
                if (have_switch_base) {
                    min_interval = std::min(min_interval, t - prev_switch_t);
                }
                prev_switch_t = t;
                have_switch_base = true;
            }
            prev_relay = r;
        }
    }

    if (summary_path && std::filesystem::exists(*summary_path)) {
        std::ifstream sin(*summary_path);
        json j;
        sin >> j;
        if (j.contains("n_steps") && j["n_steps"].get<std::size_t>() != n_rows) {
            violations.push_back("row count " + std::to_string(n_rows) +
                                 " != summary n_steps " +
                                 std::to_string(j["n_steps"].get<std::size_t>()));
        }
        if (j.contains("esc")) {
            const double dwell = j["esc"]["dwell_limit_s"].get<double>();
            if (min_interval < dwell - 1e-9) {
                violations.push_back("relay switch interval " + fmt_double(min_interval) +
                                     " s below dwell limit " + fmt_double(dwell) + " s");
            }
            const double x_min = j["esc"]["x_min_pct"].get<double>();
            const double x_max = j["esc"]["x_max_pct"].get<double>();
            if (n_rows > 0 && (fan_min < x_min - 1e-9 || fan_max > x_max + 1e-9)) {
                violations.push_back("fan command escapes the configured range [" +
                                     fmt_double(x_min) + ", " + fmt_double(x_max) + "]");
            }
        }
    }
    return violations;
}

} // namespace ctopt
