#ifndef CTOPT_CHILLER_HPP
#define CTOPT_CHILLER_HPP

#include <array>

namespace ctopt {

// Electric chiller performance curves in the DOE-2 form:
//   capacity fraction  psi1(Tel, Tce)  biquadratic in evaporator-leaving and
//                                      condenser-entering temperature
//   energy input ratio psi2(Tel, Tce)  biquadratic in the same temperatures
//   energy input ratio psi3(PLR)       quadratic in part load ratio
// Coefficients are fitted offline (manufacturer data); here they are plain
// config inputs.
struct ChillerCurves {
    std::array<double, 6> a{};  // psi1 coefficients a0..a5
    std::array<double, 6> b{};  // psi2 coefficients b0..b5
    std::array<double, 3> c{};  // psi3 coefficients c0..c2
    double c_ref_kw = 0.0;      // reference capacity, kW
    double cop_ref = 0.0;       // reference coefficient of performance
};

struct ChillerResult {
    double p_chiller_kw;  // compressor electrical power
    double plr;           // part load ratio after clamping
    double q_load_kw;     // evaporator-side cooling load
};

// Capacity curve, clamped below at 0.1 so the part load ratio stays finite
// for off-design coefficient sets.
double chiller_capacity_psi1(double t_evap_l_c, double t_cond_e_c,
                             const ChillerCurves& curves);

double chiller_eir_psi2(double t_evap_l_c, double t_cond_e_c,
                        const ChillerCurves& curves);

double chiller_eir_psi3(double plr, const ChillerCurves& curves);

// Compressor power from loop temperatures and chilled-water flow.
//   q_load  = m_chw * cp * (T_evap_e - T_evap_l)        [kW, cp in kJ/(kg K)]
//   Q_avail = c_ref * psi1
//   PLR     = clamp(q_load / Q_avail, plr_min, plr_max)
//   P       = Q_avail * psi2 * psi3(PLR) / cop_ref
// Throws model_error when t_evap_e < t_evap_l (heating direction indicates
// mis-wired sensors) or when m_chw <= 0.
ChillerResult chiller_power(double t_evap_e_c, double t_evap_l_c,
                            double t_cond_e_c, double m_chw_kg_s,
                            const ChillerCurves& curves, double cp_kj_kg_k,
                            double plr_min, double plr_max);

} // namespace ctopt

#endif // CTOPT_CHILLER_HPP
