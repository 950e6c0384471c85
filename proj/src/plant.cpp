#include "ctopt/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctopt/errors.hpp"

namespace ctopt {

// 1 HP = 0.7457 kW (motor nameplate conversion).
static constexpr double kKwPerHp = 0.7457;

double fan_power(double fan_hp, double speed_pct) {
    if (fan_hp < 0.0) {
        throw model_error("fan_power: motor size must be >= 0 HP (got " +
                          std::to_string(fan_hp) + ")");
    }
    if (!(speed_pct >= 0.0 && speed_pct <= 100.0)) {
        throw model_error("fan_power: speed must be in [0, 100] % (got " +
                          std::to_string(speed_pct) + ")");
    }
    const double frac = speed_pct / 100.0;
    return fan_hp * kKwPerHp * frac * frac * frac;
}

double tower_effectiveness(double speed_pct, const PlantConfig& cfg) {
    const double frac = std::clamp(speed_pct, 0.0, 100.0) / 100.0;
    // lerp hits both endpoints exactly, keeping eps within [eps0, eps1]
    return std::lerp(cfg.tower_eps0, cfg.tower_eps1, std::pow(frac, cfg.tower_exp));
}

double plant_load_kw(const PlantConfig& cfg, const WeatherSample& weather) {
    const double q = cfg.q_load_kw *
                     (1.0 + cfg.load_weather_coeff * (weather.t_db_c - cfg.load_t_ref_c));
    return std::max(0.0, q);
}

ChillerResult chiller_power(double t_evap_e_c, double t_evap_l_c,
                            double t_cond_e_c, const PlantConfig& cfg) {
    return chiller_power(t_evap_e_c, t_evap_l_c, t_cond_e_c, cfg.m_chw_kg_s,
                         cfg.curves, cfg.cp_water_kj_kg_k, cfg.plr_min,
                         cfg.plr_max);
}

static PowerBreakdown assemble_powers(double p_chiller_kw, double p_tower_kw,
                                      const PlantConfig& cfg) {
    PowerBreakdown p;
    p.p_chiller_kw = p_chiller_kw;
    p.p_tower_kw = p_tower_kw;
    p.p_cw_pump_kw = cfg.p_cw_pump_kw;
    p.p_chw_pump_kw = cfg.p_chw_pump_kw;
    p.p_ahu_kw = cfg.p_ahu_kw;
    p.p_total_kw = p.p_chiller_kw + p.p_tower_kw + p.p_cw_pump_kw +
                   p.p_chw_pump_kw + p.p_ahu_kw;
    return p;
}

PlantState plant_step(const PlantState& prev, double fan_cmd_pct,
                      const WeatherSample& weather, double dt_s,
                      const PlantConfig& cfg) {
    if (dt_s <= 0.0) {
        throw model_error("plant_step: dt must be > 0 s");
    }
    if (!(fan_cmd_pct >= 0.0 && fan_cmd_pct <= 100.0)) {
        throw model_error("plant_step: fan command must be in [0, 100] % (got " +
                          std::to_string(fan_cmd_pct) + ")");
    }

    const double cp = cfg.cp_water_kj_kg_k;
    const double q_load = plant_load_kw(cfg, weather);

    // Condenser loop closes with the previous step's compressor power; the
    // algebraic fixed point is not iterated (first-order splitting error,
    // stable at dt well below tau_plant).
    const double q_rej = q_load + prev.powers.p_chiller_kw;
    const double t_cwr = prev.t_cws_c + q_rej / (cfg.m_cond_kg_s * cp);

    const double eff = tower_effectiveness(fan_cmd_pct, cfg);
    double t_cws_eq = t_cwr - eff * (t_cwr - weather.t_wb_c);
    t_cws_eq = std::max(t_cws_eq, weather.t_wb_c);

    double t_cws = prev.t_cws_c + (dt_s / cfg.tau_plant_s) * (t_cws_eq - prev.t_cws_c);
    // Evaporative rejection cannot pull the loop below the wet bulb.
    t_cws = std::max(t_cws, weather.t_wb_c);

    const double t_evap_l = cfg.t_chws_setpoint_c;
    const double t_evap_e = t_evap_l + q_load / (cfg.m_chw_kg_s * cp);
    const ChillerResult ch = chiller_power(t_evap_e, t_evap_l, t_cws, cfg);

    PlantState next;
    next.t_s = prev.t_s + dt_s;
    next.t_cws_c = t_cws;
    next.t_cwr_c = t_cwr;
    next.t_chwr_c = t_evap_e;
    next.fan_speed_pct = fan_cmd_pct;
    next.plr = ch.plr;
    next.powers = assemble_powers(ch.p_chiller_kw, fan_power(cfg.fan_hp, fan_cmd_pct), cfg);
    return next;
}

PlantState make_initial_state(const PlantConfig& cfg,
                              const WeatherSample& weather,
                              double fan_speed_pct) {
    const double cp = cfg.cp_water_kj_kg_k;
    const double q_load = plant_load_kw(cfg, weather);

    PlantState s;
    s.t_s = 0.0;
    s.t_cws_c = weather.t_wb_c + 5.0;  // plausible approach before settling
    s.fan_speed_pct = std::clamp(fan_speed_pct, 0.0, 100.0);

    const double t_evap_l = cfg.t_chws_setpoint_c;
    const double t_evap_e = t_evap_l + q_load / (cfg.m_chw_kg_s * cp);
    const ChillerResult ch = chiller_power(t_evap_e, t_evap_l, s.t_cws_c, cfg);

    s.t_chwr_c = t_evap_e;
    s.t_cwr_c = s.t_cws_c + (q_load + ch.p_chiller_kw) / (cfg.m_cond_kg_s * cp);
    s.plr = ch.plr;
    s.powers = assemble_powers(ch.p_chiller_kw, fan_power(cfg.fan_hp, s.fan_speed_pct), cfg);
    return s;
}

} // namespace ctopt
