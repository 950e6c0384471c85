#include "ctopt/chiller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctopt/errors.hpp"

namespace ctopt {

namespace {

double biquadratic(const std::array<double, 6>& k, double t_el, double t_ce) {
    return k[0] + k[1] * t_el + k[2] * t_el * t_el + k[3] * t_ce +
           k[4] * t_ce * t_ce + k[5] * t_el * t_ce;
}

} // namespace

double chiller_capacity_psi1(double t_evap_l_c, double t_cond_e_c,
                             const ChillerCurves& curves) {
    // Floor at 0.1: keeps PLR finite when coefficients are evaluated far
    // outside their fit range.
    return std::max(0.1, biquadratic(curves.a, t_evap_l_c, t_cond_e_c));
}

double chiller_eir_psi2(double t_evap_l_c, double t_cond_e_c,
                        const ChillerCurves& curves) {
    return biquadratic(curves.b, t_evap_l_c, t_cond_e_c);
}

double chiller_eir_psi3(double plr, const ChillerCurves& curves) {
    return curves.c[0] + curves.c[1] * plr + curves.c[2] * plr * plr;
}

ChillerResult chiller_power(double t_evap_e_c, double t_evap_l_c,
                            double t_cond_e_c, double m_chw_kg_s,
                            const ChillerCurves& curves, double cp_kj_kg_k,
                            double plr_min, double plr_max) {
    if (!std::isfinite(t_evap_e_c) || !std::isfinite(t_evap_l_c) ||
        !std::isfinite(t_cond_e_c)) {
        throw model_error("chiller_power: non-finite temperature input");
    }
    if (m_chw_kg_s <= 0.0) {
        throw model_error("chiller_power: chilled water flow must be > 0 (got " +
                          std::to_string(m_chw_kg_s) + ")");
    }
    if (t_evap_e_c < t_evap_l_c) {
        throw model_error("chiller_power: evaporator entering temperature below "
                          "leaving temperature (heating direction; check sensor wiring)");
    }

    const double q_load_kw = m_chw_kg_s * cp_kj_kg_k * (t_evap_e_c - t_evap_l_c);
    const double psi1 = chiller_capacity_psi1(t_evap_l_c, t_cond_e_c, curves);
    const double q_avail_kw = curves.c_ref_kw * psi1;
    const double plr = std::clamp(q_load_kw / q_avail_kw, plr_min, plr_max);
    const double psi2 = chiller_eir_psi2(t_evap_l_c, t_cond_e_c, curves);
    const double psi3 = chiller_eir_psi3(plr, curves);
    const double p_kw = q_avail_kw * psi2 * psi3 / curves.cop_ref;

    return ChillerResult{p_kw, plr, q_load_kw};
}

} // namespace ctopt
