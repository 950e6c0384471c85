#include "ctopt/baseline.hpp"

#include <algorithm>
#include <cmath>

namespace ctopt {

double ideal_pid_step(const IdealPidConfig& cfg, const PlantState& state,
                      const WeatherSample& weather, const PlantConfig& plant) {
    const double t_cwr = state.t_cwr_c;
    if (t_cwr <= cfg.t_cws_setpoint_c) {
        return 0.0;  // no rejection needed
    }
    const double pinch = t_cwr - weather.t_wb_c;
    if (pinch <= 0.0) {
        return 100.0;  // air warmer than the water: setpoint unreachable
    }
    const double eff_req = (t_cwr - cfg.t_cws_setpoint_c) / pinch;
    if (eff_req >= plant.tower_eps1) {
        return 100.0;
    }
    if (eff_req <= plant.tower_eps0) {
        return 0.0;
    }
    const double frac =
        (eff_req - plant.tower_eps0) / (plant.tower_eps1 - plant.tower_eps0);
    return std::clamp(100.0 * std::pow(frac, 1.0 / plant.tower_exp), 0.0, 100.0);
}

} // namespace ctopt
