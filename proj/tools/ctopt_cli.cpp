// ctopt: command-line front end for the cooling tower fan optimization
// toolkit. Subcommands mirror the experiment workflow: closed-loop runs,
// static-map sweeps, controller comparisons, impulse tests, virtual power
// meter validation and run-record validation.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctopt/config.hpp"
#include "ctopt/errors.hpp"
#include "ctopt/harness.hpp"
#include "ctopt/sysid.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir = "out";
    std::int64_t seed = -1;  // <0: keep the scenario's seed
    int jobs = 1;
    std::string cost_source;  // empty: keep the scenario's setting
};

ctopt::Scenario load_with_overrides(const CommonOpts& opts) {
    ctopt::Scenario sc = ctopt::load_scenario(opts.scenario_path);
    if (opts.seed >= 0) {
        sc.seed = static_cast<std::uint64_t>(opts.seed);
        if (sc.noise) sc.noise->seed = sc.seed;
    }
    if (!opts.cost_source.empty()) {
        if (opts.cost_source == "true") {
            sc.cost_source = ctopt::CostSource::true_power;
        } else if (opts.cost_source == "vpm") {
            sc.cost_source = ctopt::CostSource::vpm;
        } else {
            throw ctopt::config_error("--cost-source must be true|vpm");
        }
    }
    return sc;
}

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_cost_source) {
    cmd->add_option("scenario", opts.scenario_path, "Scenario config file")
        ->required();
    cmd->add_option("--out", opts.out_dir, "Output directory (default: out)");
    cmd->add_option("--seed", opts.seed, "Override the scenario seed");
    cmd->add_option("--jobs", opts.jobs, "Worker threads for independent runs")
        ->check(CLI::PositiveNumber);
    if (with_cost_source) {
        cmd->add_option("--cost-source", opts.cost_source,
                        "Cost fed to the controller: true|vpm");
    }
}

std::vector<double> default_speed_grid() {
    std::vector<double> speeds;
    for (int s = 0; s <= 100; s += 5) speeds.push_back(s);
    return speeds;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chilled-water plant cooling tower fan optimization toolkit"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "Closed-loop scenario run");
    add_common(run_cmd, run_opts, true);

    CommonOpts sweep_opts;
    std::vector<double> sweep_speeds;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Fixed-speed static map of the cost");
    add_common(sweep_cmd, sweep_opts, false);
    sweep_cmd->add_option("--speeds", sweep_speeds,
                          "Fan speeds in percent (default: 0,5,...,100)")
        ->delimiter(',');

    CommonOpts cmp_opts;
    CLI::App* cmp_cmd =
        app.add_subcommand("compare", "ESC vs fixed-100% vs idealized PID");
    add_common(cmp_cmd, cmp_opts, false);

    CommonOpts imp_opts;
    double imp_base = 25.0;
    double imp_pulse = 100.0;
    double imp_pulse_duration = 3600.0;
    double imp_settle = 3600.0;
    CLI::App* imp_cmd =
        app.add_subcommand("impulse", "Impulse test estimating the plant time constant");
    add_common(imp_cmd, imp_opts, false);
    imp_cmd->add_option("--base", imp_base, "Base fan speed, % (default 25)");
    imp_cmd->add_option("--pulse", imp_pulse, "Pulse fan speed, % (default 100)");
    imp_cmd->add_option("--pulse-duration", imp_pulse_duration,
                        "Pulse hold time, s (default 3600)");
    imp_cmd->add_option("--settle", imp_settle, "Return leg duration, s (default 3600)");

    CommonOpts vpm_opts;
    double vpm_flow_error = -20.0;
    std::size_t vpm_smooth = 1;
    bool vpm_no_correction = false;
    CLI::App* vpm_cmd = app.add_subcommand(
        "vpm-validate", "Degraded-sensor virtual power meter vs plant truth");
    add_common(vpm_cmd, vpm_opts, false);
    vpm_cmd->add_option("--flow-error", vpm_flow_error,
                        "Assumed-flow error, % of true flow (default -20)");
    vpm_cmd->add_option("--smooth", vpm_smooth,
                        "Odd moving-average window in steps (default 1 = off)");
    vpm_cmd->add_flag("--no-correction", vpm_no_correction,
                      "Skip the least-squares correction factor");

    std::string validate_csv;
    std::string validate_summary;
    CLI::App* val_cmd = app.add_subcommand("validate", "Check a run record's invariants");
    val_cmd->add_option("run_csv", validate_csv, "Run record CSV")->required();
    val_cmd->add_option("--summary", validate_summary,
                        "Sidecar summary JSON (default: <run>_summary.json)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const ctopt::Scenario sc = load_with_overrides(run_opts);
            const fs::path out = ensure_out_dir(run_opts.out_dir);
            const ctopt::RunRecord rec = ctopt::run_scenario(sc);
            const fs::path csv = out / (sc.name + "_run.csv");
            const fs::path summary = out / (sc.name + "_run_summary.json");
            ctopt::write_run_csv(csv, rec);
            ctopt::write_summary_json(summary, rec.summary);
            std::cout << "run: " << rec.summary.n_steps << " steps, total "
                      << rec.summary.kwh_total << " kWh -> " << csv.string() << '\n';
        } else if (*sweep_cmd) {
            const ctopt::Scenario sc = load_with_overrides(sweep_opts);
            const fs::path out = ensure_out_dir(sweep_opts.out_dir);
            if (sweep_speeds.empty()) sweep_speeds = default_speed_grid();
            const auto points = ctopt::run_sweep(sc, sweep_speeds, sweep_opts.jobs);
            const fs::path csv = out / (sc.name + "_sweep.csv");
            ctopt::write_sweep_csv(csv, points);
            const auto best = std::min_element(
                points.begin(), points.end(),
                [](const auto& a, const auto& b) { return a.kwh_total < b.kwh_total; });
            std::cout << "sweep: " << points.size() << " speeds, minimum "
                      << best->kwh_total << " kWh at " << best->speed_pct << " % -> "
                      << csv.string() << '\n';
        } else if (*cmp_cmd) {
            const ctopt::Scenario sc = load_with_overrides(cmp_opts);
            const fs::path out = ensure_out_dir(cmp_opts.out_dir);
            const ctopt::CompareReport rep = ctopt::compare_controllers(sc, cmp_opts.jobs);
            const fs::path jpath = out / (sc.name + "_compare.json");
            ctopt::write_compare_json(jpath, rep);
            std::cout << "compare: esc " << rep.kwh_esc << " kWh, fixed-100 "
                      << rep.kwh_fixed100 << " kWh, pid " << rep.kwh_pid
                      << " kWh; esc saves " << rep.esc_vs_fixed_pct
                      << " % vs fixed, " << rep.esc_vs_pid_pct << " % vs pid -> "
                      << jpath.string() << '\n';
        } else if (*imp_cmd) {
            const ctopt::Scenario sc = load_with_overrides(imp_opts);
            const fs::path out = ensure_out_dir(imp_opts.out_dir);
            ctopt::ImpulseTestSpec spec;
            spec.base_speed_pct = imp_base;
            spec.pulse_speed_pct = imp_pulse;
            spec.pulse_duration_s = imp_pulse_duration;
            spec.settle_duration_s = imp_settle;
            const ctopt::WeatherSeries weather = ctopt::load_weather(sc.weather_path);
            const ctopt::ImpulseResult res =
                ctopt::run_impulse_test(spec, sc.plant, weather.sample_at(0.0), sc.dt_s);
            const fs::path csv = out / (sc.name + "_impulse.csv");
            ctopt::write_impulse_csv(csv, res.trace);
            std::cout << "impulse: tau_est = " << res.tau_est_s << " s -> "
                      << csv.string() << '\n';
        } else if (*vpm_cmd) {
            const ctopt::Scenario sc = load_with_overrides(vpm_opts);
            const fs::path out = ensure_out_dir(vpm_opts.out_dir);
            const ctopt::VpmValidationReport rep = ctopt::vpm_validate(
                sc, vpm_flow_error, vpm_smooth, !vpm_no_correction);
            const fs::path metrics = out / (sc.name + "_vpm_metrics.json");
            const fs::path hist = out / (sc.name + "_vpm_hist.csv");
            ctopt::write_vpm_report(metrics, hist, rep);
            std::cout << "vpm-validate: r2 = " << rep.metrics.r2 << ", rmse = "
                      << rep.metrics.rmse << " kW, nrmse = " << rep.metrics.nrmse
                      << ", correction = " << rep.correction_factor << " -> "
                      << metrics.string() << '\n';
        } else if (*val_cmd) {
            std::optional<fs::path> summary;
            if (!validate_summary.empty()) {
                summary = fs::path(validate_summary);
            } else {
                fs::path guess(validate_csv);
                guess.replace_extension();
                guess += "_summary.json";
                summary = guess;
            }
            const auto violations = ctopt::validate_run_csv(validate_csv, summary);
            if (violations.empty()) {
                std::cout << "validate: ok\n";
            } else {
                for (const auto& v : violations) {
                    std::cerr << "violation: " << v << '\n';
                }
                return kExitRuntime;
            }
        }
    } catch (const ctopt::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
