#ifndef CTOPT_METRICS_HPP
#define CTOPT_METRICS_HPP

#include <cstddef>
#include <vector>

namespace ctopt {

struct MetricsReport {
    double r2 = 0.0;     // coefficient of determination (<= 1)
    double rmse = 0.0;   // root mean square error, kW
    double nrmse = 0.0;  // RMSE normalized by the range of the measured data
    std::size_t n = 0;
};

struct SavingsStats {
    double mean_pct = 0.0;
    double std_pct = 0.0;       // sample standard deviation (n-1)
    double ci95_low_pct = 0.0;  // Student-t 95% confidence interval
    double ci95_high_pct = 0.0;
    std::size_t n_days = 0;
};

// R^2, RMSE and range-normalized RMSE of an estimate against measurements.
// Throws model_error on length mismatch, empty input, zero measured range
// (NRMSE undefined) or zero measured variance (R^2 undefined).
MetricsReport compute_metrics(const std::vector<double>& measured,
                              const std::vector<double>& estimated);

// Left-rectangle energy integral: sum(p_i) * dt / 3600. Empty series -> 0.
double integrate_energy_kwh(const std::vector<double>& power_kw, double dt_s);

// Per-day percent savings (baseline - treatment)/baseline with mean, sample
// std and a Student-t 95% CI. Throws model_error for n < 2, length mismatch
// or non-positive baseline values.
SavingsStats daily_savings_stats(const std::vector<double>& baseline_daily_kwh,
                                 const std::vector<double>& treatment_daily_kwh);

// Two-sided 95% Student-t critical value (table for df 1..30, normal beyond).
double student_t_975(std::size_t df);

} // namespace ctopt

#endif // CTOPT_METRICS_HPP
