// Test-local reference implementations. These stay independent of the
// library code paths they check: straight transliterations of the defining
// formulas, evaluated with different association orders where it matters.
#ifndef CTOPT_TESTS_ORACLES_HPP
#define CTOPT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ctopt/chiller.hpp"

namespace oracle {

inline double biquad_terms(const std::array<double, 6>& k, double x, double y) {
    // Term-by-term with std::pow, unlike the library's multiplied-out form.
    return k[0] + k[1] * std::pow(x, 1) + k[2] * std::pow(x, 2) +
           k[3] * std::pow(y, 1) + k[4] * std::pow(y, 2) + k[5] * x * y;
}

inline double chiller_power_ref(double t_ee, double t_el, double t_ce,
                                double m_chw, const ctopt::ChillerCurves& cv,
                                double cp, double plr_min, double plr_max) {
    const double psi1 = std::max(0.1, biquad_terms(cv.a, t_el, t_ce));
    const double q_avail = cv.c_ref_kw * psi1;
    const double q_load = m_chw * cp * (t_ee - t_el);
    double plr = q_load / q_avail;
    plr = std::min(std::max(plr, plr_min), plr_max);
    const double psi2 = biquad_terms(cv.b, t_el, t_ce);
    const double psi3 = cv.c[0] + cv.c[1] * std::pow(plr, 1) + cv.c[2] * std::pow(plr, 2);
    return q_avail * psi2 * psi3 / cv.cop_ref;
}

inline double fan_power_ref(double hp, double speed_pct) {
    return hp * 0.7457 * std::pow(speed_pct / 100.0, 3);
}

struct MetricsRef {
    double r2;
    double rmse;
    double nrmse;
};

inline MetricsRef metrics_ref(const std::vector<double>& y,
                              const std::vector<double>& yhat) {
    const auto n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v / n;  // divide-as-you-go, unlike the library
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += std::pow(y[i] - yhat[i], 2);
        ss_tot += std::pow(y[i] - mean, 2);
    }
    const double y_max = *std::max_element(y.begin(), y.end());
    const double y_min = *std::min_element(y.begin(), y.end());
    MetricsRef r;
    r.rmse = std::sqrt(ss_res / n);
    r.nrmse = r.rmse / (y_max - y_min);
    r.r2 = 1.0 - ss_res / ss_tot;
    return r;
}

// Relative agreement to `digits` significant digits.
inline bool agree_sig_digits(double a, double b, int digits) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= scale * std::pow(10.0, -digits);
}

} // namespace oracle

#endif // CTOPT_TESTS_ORACLES_HPP
