#include "ctopt/sysid.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "ctopt/errors.hpp"

namespace ctopt {

double estimate_tau_rise(const std::vector<double>& response, double dt_s) {
    if (response.size() < 2) {
        throw model_error("estimate_tau_rise: need the steady sample plus at "
                          "least one response sample");
    }
    if (dt_s <= 0.0) {
        throw model_error("estimate_tau_rise: dt must be > 0 s");
    }

    const double base = response[0];
    std::size_t ext_i = 0;
    double ext_dev = 0.0;
    for (std::size_t k = 1; k < response.size(); ++k) {
        const double dev = std::abs(response[k] - base);
        if (dev > ext_dev) {
            ext_dev = dev;
            ext_i = k;
        }
    }

    const double gap = response[ext_i] - base;
    if (std::abs(gap) < 1e-6) {
        throw model_error("estimate_tau_rise: no measurable response (gap below "
                          "1e-6 noise floor)");
    }

    const double level = 1.0 - std::exp(-1.0);  // 63.212% of the gap
    double f_prev = 0.0;
    for (std::size_t k = 1; k <= ext_i; ++k) {
        const double f = (response[k] - base) / gap;
        if (f >= level) {
            if (f <= f_prev) {
                return static_cast<double>(k) * dt_s;
            }
            const double frac = (level - f_prev) / (f - f_prev);
            return (static_cast<double>(k - 1) + frac) * dt_s;
        }
        f_prev = f;
    }
    // The extremum itself sits at normalized 1 >= level, so the loop always
    // returns; this is unreachable for well-formed input.
    return static_cast<double>(ext_i) * dt_s;
}

ImpulseResult run_impulse_test(const ImpulseTestSpec& spec,
                               const PlantConfig& plant_cfg,
                               const WeatherSample& weather, double dt_s) {
    if (spec.pulse_speed_pct == spec.base_speed_pct) {
        throw config_error("impulse test: pulse speed must differ from base speed");
    }
    if (spec.pulse_duration_s <= 0.0 || spec.settle_duration_s <= 0.0) {
        throw config_error("impulse test: durations must be > 0 s");
    }
    if (dt_s <= 0.0) {
        throw config_error("impulse test: dt must be > 0 s");
    }

    // Settle at the base speed for at least ten plant time constants so the
    // pre-pulse value is genuinely steady.
    const auto steps_for = [dt_s](double duration) {
        return static_cast<std::size_t>(std::ceil(duration / dt_s));
    };
    const std::size_t n_settle_pre =
        steps_for(std::max(10.0 * plant_cfg.tau_plant_s, spec.settle_duration_s));
    const std::size_t n_pulse = steps_for(spec.pulse_duration_s);
    const std::size_t n_return = steps_for(spec.settle_duration_s);

    PlantState state = make_initial_state(plant_cfg, weather, spec.base_speed_pct);
    for (std::size_t i = 0; i < n_settle_pre; ++i) {
        state = plant_step(state, spec.base_speed_pct, weather, dt_s, plant_cfg);
    }

    ImpulseResult result;
    result.trace.reserve(1 + n_pulse + n_return);
    result.trace.push_back({0.0, spec.base_speed_pct, state.powers.p_total_kw});

    // The estimation signal excludes the commanded fan's own instantaneous
    // cube-law term; what remains is the plant's dynamic response.
    std::vector<double> slow;
    slow.reserve(1 + n_pulse);
    slow.push_back(state.powers.p_total_kw -
                   fan_power(plant_cfg.fan_hp, spec.base_speed_pct));

    double t = 0.0;
    for (std::size_t i = 0; i < n_pulse; ++i) {
        state = plant_step(state, spec.pulse_speed_pct, weather, dt_s, plant_cfg);
        t += dt_s;
        result.trace.push_back({t, spec.pulse_speed_pct, state.powers.p_total_kw});
        slow.push_back(state.powers.p_total_kw -
                       fan_power(plant_cfg.fan_hp, spec.pulse_speed_pct));
    }
    for (std::size_t i = 0; i < n_return; ++i) {
        state = plant_step(state, spec.base_speed_pct, weather, dt_s, plant_cfg);
        t += dt_s;
        result.trace.push_back({t, spec.base_speed_pct, state.powers.p_total_kw});
    }

    result.tau_est_s = estimate_tau_rise(slow, dt_s);
    return result;
}

} // namespace ctopt
