#ifndef CTOPT_SYSID_HPP
#define CTOPT_SYSID_HPP

#include <vector>

#include "ctopt/plant.hpp"

namespace ctopt {

struct ImpulseTestSpec {
    double base_speed_pct = 25.0;
    double pulse_speed_pct = 100.0;
    double pulse_duration_s = 3600.0;
    double settle_duration_s = 3600.0;
};

struct ImpulseTracePoint {
    double t_s;
    double fan_speed_pct;
    double p_total_kw;
};

struct ImpulseResult {
    std::vector<ImpulseTracePoint> trace;  // baseline sample, pulse, return
    double tau_est_s = 0.0;
};

// 63.2%-rise-time estimate of a first-order time constant. response[0] is the
// pre-edge steady sample; the input change lands between samples 0 and 1.
// The crossing of (1 - 1/e) of the gap between the steady value and the
// response extremum is located by linear interpolation between samples.
// Invariant to constant offsets. Throws model_error when the gap is below
// the 1e-6 noise floor ("no measurable response").
double estimate_tau_rise(const std::vector<double>& response, double dt_s);

// Settle the plant at the base speed (at least 10 plant time constants),
// apply the pulse, record total power through the pulse and the returnleg.
// The time constant is estimated on the rising edge from the plant's dynamic
// response (total power minus the commanded fan's own instantaneous power);
// the return edge is recorded but unused.
ImpulseResult run_impulse_test(const ImpulseTestSpec& spec,
                               const PlantConfig& plant_cfg,
                               const WeatherSample& weather, double dt_s);

} // namespace ctopt

#endif // CTOPT_SYSID_HPP
