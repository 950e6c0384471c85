#ifndef CTOPT_ESC_HPP
#define CTOPT_ESC_HPP

namespace ctopt {

// Relay extremum-seeking controller tuning. Every internal knob derives from
// the plant time constant tau:
//   dwell_limit = tau + tau_f
//   k_gain      = dt * (x_max - x_min) / (5 * (tau + tau_f))
// so the actuator range is traversed in about five dwell periods.
struct EscConfig {
    double tau_s = 0.0;
    double tau_f_s = 0.0;   // smoothing filter time constant
    double dt_s = 0.0;
    double x_min_pct = 0.0;
    double x_max_pct = 0.0;
    double k_gain_pct = 0.0;       // derived, percent per step
    double dwell_limit_s = 0.0;    // derived, minimum relay hold time
    double gradient_epsilon_kw = 1e-9;  // |gradient| below this reads as flat
};

struct EscState {
    int relay_sign = +1;           // -1 or +1
    double dwell_elapsed_s = 0.0;  // seconds since the last relay switch
    double x_pct = 0.0;            // manipulated variable (fan speed command)
    double j_filtered_kw = 0.0;    // low-pass-filtered cost
    double j_filtered_prev_kw = 0.0;
    bool initialized = false;
};

struct EscStepResult {
    EscState state;
    double x_command_pct;  // equals state.x_pct
};

// Throws config_error naming the offending parameter when a bound is violated
// (tau > 0, tau_f >= 0, dt > 0, x_min < x_max).
EscConfig configure_esc(double tau_s, double tau_f_s, double dt_s,
                        double x_min_pct, double x_max_pct);

// Relay starts high, command at the middle of the actuator range, filter
// unseeded until the first measurement arrives.
EscState make_initial_esc_state(const EscConfig& cfg);

// One controller update against the latest cost sample:
//   filter the cost, difference it, flip the relay when the cost is rising
//   along the current direction and the dwell has elapsed, then integrate
//   the relay through the gain and saturate.
// The dwell timer also gates the first switch after startup, so filter
// transients cannot flip the relay early. Throws model_error on a non-finite
// cost input, leaving the state untouched.
EscStepResult esc_step(const EscConfig& cfg, const EscState& state,
                       double j_measured_kw);

} // namespace ctopt

#endif // CTOPT_ESC_HPP
