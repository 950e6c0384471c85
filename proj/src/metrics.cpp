#include "ctopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctopt/errors.hpp"

namespace ctopt {

MetricsReport compute_metrics(const std::vector<double>& measured,
                              const std::vector<double>& estimated) {
    if (measured.empty() || measured.size() != estimated.size()) {
        throw model_error("compute_metrics: series must be non-empty and of equal length");
    }
    const std::size_t n = measured.size();

    double mean = 0.0;
    double y_min = measured[0];
    double y_max = measured[0];
    for (double y : measured) {
        mean += y;
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }
    mean /= static_cast<double>(n);

    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = measured[i] - estimated[i];
        const double d = measured[i] - mean;
        ss_res += e * e;
        ss_tot += d * d;
    }

    const double range = y_max - y_min;
    if (!(range > 0.0)) {
        throw model_error("compute_metrics: NRMSE undefined, measured range is zero");
    }
    if (!(ss_tot > 0.0)) {
        throw model_error("compute_metrics: R^2 undefined, measured variance is zero");
    }

    MetricsReport r;
    r.n = n;
    r.rmse = std::sqrt(ss_res / static_cast<double>(n));
    r.nrmse = r.rmse / range;
    r.r2 = 1.0 - ss_res / ss_tot;
    return r;
}

double integrate_energy_kwh(const std::vector<double>& power_kw, double dt_s) {
    if (dt_s <= 0.0) {
        throw model_error("integrate_energy: dt must be > 0 s");
    }
    double sum = 0.0;
    for (double p : power_kw) {
        sum += p;
    }
    return sum * dt_s / 3600.0;
}

double student_t_975(std::size_t df) {
    // Two-sided 95% critical values; beyond df=30 the normal value is close
    // enough for savings intervals.
    static constexpr double table[30] = {
        12.706205, 4.302653, 3.182446, 2.776445, 2.570582, 2.446912,
        2.364624,  2.306004, 2.262157, 2.228139, 2.200985, 2.178813,
        2.160369,  2.144787, 2.131450, 2.119905, 2.109816, 2.100922,
        2.093024,  2.085963, 2.079614, 2.073873, 2.068658, 2.063899,
        2.059539,  2.055529, 2.051831, 2.048407, 2.045230, 2.042272};
    if (df == 0) {
        throw model_error("student_t_975: zero degrees of freedom");
    }
    return df <= 30 ? table[df - 1] : 1.959964;
}

SavingsStats daily_savings_stats(const std::vector<double>& baseline_daily_kwh,
                                 const std::vector<double>& treatment_daily_kwh) {
    if (baseline_daily_kwh.size() != treatment_daily_kwh.size()) {
        throw model_error("daily_savings_stats: series length mismatch");
    }
    const std::size_t n = baseline_daily_kwh.size();
    if (n < 2) {
        throw model_error("daily_savings_stats: need at least 2 days (got " +
                          std::to_string(n) + ")");
    }

    std::vector<double> savings(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(baseline_daily_kwh[i] > 0.0)) {
            throw model_error("daily_savings_stats: baseline energy must be > 0 on day " +
                              std::to_string(i));
        }
        savings[i] = 100.0 * (baseline_daily_kwh[i] - treatment_daily_kwh[i]) /
                     baseline_daily_kwh[i];
    }

    double mean = 0.0;
    for (double s : savings) mean += s;
    mean /= static_cast<double>(n);

    double ss = 0.0;
    for (double s : savings) ss += (s - mean) * (s - mean);
    const double std_dev = std::sqrt(ss / static_cast<double>(n - 1));

    const double half = student_t_975(n - 1) * std_dev /
                        std::sqrt(static_cast<double>(n));

    SavingsStats out;
    out.mean_pct = mean;
    out.std_pct = std_dev;
    out.ci95_low_pct = mean - half;
    out.ci95_high_pct = mean + half;
    out.n_days = n;
    return out;
}

} // namespace ctopt
