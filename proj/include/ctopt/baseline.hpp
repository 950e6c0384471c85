#ifndef CTOPT_BASELINE_HPP
#define CTOPT_BASELINE_HPP

#include "ctopt/plant.hpp"

namespace ctopt {

struct FixedSpeedConfig {
    double speed_pct = 100.0;
};

struct IdealPidConfig {
    double t_cws_setpoint_c = 25.0;
};

inline double fixed_step(const FixedSpeedConfig& cfg) { return cfg.speed_pct; }

// Idealized setpoint tracking: invert the tower effectiveness relation for
// the fan speed that lands the equilibrium supply temp on the setpoint.
//   eps_req = (T_cwr - setpoint) / (T_cwr - t_wb)
//   speed   = 100 * ((eps_req - eps0) / (eps1 - eps0))^(1/exp)
// Saturates at 100% when the setpoint is unreachable (eps_req > eps1, e.g.
// wet bulb at or above setpoint) and at 0% when no rejection is needed.
double ideal_pid_step(const IdealPidConfig& cfg, const PlantState& state,
                      const WeatherSample& weather, const PlantConfig& plant);

} // namespace ctopt

#endif // CTOPT_BASELINE_HPP
