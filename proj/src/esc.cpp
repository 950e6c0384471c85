#include "ctopt/esc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctopt/errors.hpp"

namespace ctopt {

EscConfig configure_esc(double tau_s, double tau_f_s, double dt_s,
                        double x_min_pct, double x_max_pct) {
    if (!(tau_s > 0.0)) {
        throw config_error("configure_esc: tau must be > 0 s (got " +
                           std::to_string(tau_s) + ")");
    }
    if (!(tau_f_s >= 0.0)) {
        throw config_error("configure_esc: tau_f must be >= 0 s (got " +
                           std::to_string(tau_f_s) + ")");
    }
    if (!(dt_s > 0.0)) {
        throw config_error("configure_esc: dt must be > 0 s (got " +
                           std::to_string(dt_s) + ")");
    }
    if (!(x_min_pct < x_max_pct)) {
        throw config_error("configure_esc: x_min must be < x_max (got " +
                           std::to_string(x_min_pct) + " >= " +
                           std::to_string(x_max_pct) + ")");
    }

    EscConfig cfg;
    cfg.tau_s = tau_s;
    cfg.tau_f_s = tau_f_s;
    cfg.dt_s = dt_s;
    cfg.x_min_pct = x_min_pct;
    cfg.x_max_pct = x_max_pct;
    cfg.dwell_limit_s = tau_s + tau_f_s;
    cfg.k_gain_pct = dt_s * (x_max_pct - x_min_pct) / (5.0 * (tau_s + tau_f_s));
    return cfg;
}

EscState make_initial_esc_state(const EscConfig& cfg) {
    EscState s;
    s.relay_sign = +1;
    s.dwell_elapsed_s = 0.0;
    s.x_pct = 0.5 * (cfg.x_min_pct + cfg.x_max_pct);
    s.j_filtered_kw = 0.0;
    s.j_filtered_prev_kw = 0.0;
    s.initialized = false;
    return s;
}

EscStepResult esc_step(const EscConfig& cfg, const EscState& state,
                       double j_measured_kw) {
    if (!std::isfinite(j_measured_kw)) {
        throw model_error("esc_step: cost input is not finite");
    }

    EscState s = state;
    if (!s.initialized) {
        // Seed the filter with the first measurement; the gradient reads zero.
        s.j_filtered_kw = j_measured_kw;
        s.j_filtered_prev_kw = j_measured_kw;
        s.initialized = true;
    } else {
        const double alpha = cfg.dt_s / (cfg.tau_f_s + cfg.dt_s);
        s.j_filtered_prev_kw = s.j_filtered_kw;
        s.j_filtered_kw += alpha * (j_measured_kw - s.j_filtered_kw);
    }

    // A rising filtered cost means the last move went uphill, so the relay
    // reverses once the dwell has elapsed; a falling (or flat, within the
    // epsilon band) cost lets the current direction run on.
    const double gradient = s.j_filtered_kw - s.j_filtered_prev_kw;
    const bool rising = gradient >= cfg.gradient_epsilon_kw;
    if (rising && s.dwell_elapsed_s >= cfg.dwell_limit_s) {
        s.relay_sign = -s.relay_sign;
        s.dwell_elapsed_s = 0.0;
    } else {
        s.dwell_elapsed_s += cfg.dt_s;
    }

    s.x_pct = std::clamp(s.x_pct + cfg.k_gain_pct * s.relay_sign,
                         cfg.x_min_pct, cfg.x_max_pct);
    return EscStepResult{s, s.x_pct};
}

} // namespace ctopt
