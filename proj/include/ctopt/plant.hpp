#ifndef CTOPT_PLANT_HPP
#define CTOPT_PLANT_HPP

#include "ctopt/chiller.hpp"

namespace ctopt {

// One weather point driving the plant.
struct WeatherSample {
    double timestamp_s = 0.0;
    double t_db_c = 0.0;  // dry bulb
    double t_wb_c = 0.0;  // wet bulb, must not exceed dry bulb
};

struct PlantConfig {
    ChillerCurves curves;
    double m_chw_kg_s = 0.0;        // chilled water mass flow
    double cp_water_kj_kg_k = 4.186;
    double m_cond_kg_s = 0.0;       // condenser water mass flow
    double t_chws_setpoint_c = 6.7; // chilled water supply setpoint
    double p_cw_pump_kw = 0.0;      // constant condenser water pump power
    double p_chw_pump_kw = 0.0;     // constant chilled water pump power
    double p_ahu_kw = 0.0;          // constant air-loop fan power
    double fan_hp = 0.0;            // tower fan motor size, horsepower
    double tower_eps0 = 0.0;        // tower effectiveness at 0% fan
    double tower_eps1 = 0.0;        // tower effectiveness at 100% fan
    double tower_exp = 1.0;         // effectiveness shaping exponent
    double tau_plant_s = 183.0;     // condenser loop first-order lag
    double q_load_kw = 0.0;         // constant IT-equipment cooling load
    double load_weather_coeff = 0.0; // optional per-degree load modulation
    double load_t_ref_c = 20.0;     // reference dry bulb for the modulation
    double plr_min = 0.1;
    double plr_max = 1.0;
};

struct PowerBreakdown {
    double p_chiller_kw = 0.0;
    double p_tower_kw = 0.0;
    double p_cw_pump_kw = 0.0;
    double p_chw_pump_kw = 0.0;
    double p_ahu_kw = 0.0;
    double p_total_kw = 0.0;  // sum of the five components
};

struct PlantState {
    double t_s = 0.0;
    double t_cws_c = 0.0;      // condenser water supply (tower outlet)
    double t_cwr_c = 0.0;      // condenser water return (tower inlet)
    double t_chwr_c = 0.0;     // chilled water return (evaporator entering)
    double fan_speed_pct = 0.0;
    double plr = 0.0;
    PowerBreakdown powers;
};

// Fan power follows the cube of speed; motor size converts HP -> kW at 0.7457.
// Throws model_error for speed outside [0, 100] or negative motor size.
double fan_power(double fan_hp, double speed_pct);

// eps = eps0 + (eps1 - eps0) * (speed/100)^tower_exp, monotone in speed.
double tower_effectiveness(double speed_pct, const PlantConfig& cfg);

// Cooling load at the current weather (constant load plus optional
// dry-bulb-linear term), floored at zero.
double plant_load_kw(const PlantConfig& cfg, const WeatherSample& weather);

// Convenience overload pulling flow, cp and PLR clamps from the plant config.
ChillerResult chiller_power(double t_evap_e_c, double t_evap_l_c,
                            double t_cond_e_c, const PlantConfig& cfg);

// Advance the plant one step:
//   1. heat rejection = current load + previous step's chiller power
//   2. condenser return temp from the rejection over the condenser flow
//   3. tower equilibrium supply temp via effectiveness, floored at wet bulb
//   4. first-order relaxation of the supply temp toward equilibrium
//   5. chiller evaluated at the new supply temp and setpoint-derived
//      evaporator temperatures
//   6. constant pump/AHU powers complete the breakdown
PlantState plant_step(const PlantState& prev, double fan_cmd_pct,
                      const WeatherSample& weather, double dt_s,
                      const PlantConfig& cfg);

// Steady-ish starting point for a run: supply temp a few degrees above the
// wet bulb, chiller evaluated once so the first step has a previous power.
PlantState make_initial_state(const PlantConfig& cfg,
                              const WeatherSample& weather,
                              double fan_speed_pct);

} // namespace ctopt

#endif // CTOPT_PLANT_HPP
