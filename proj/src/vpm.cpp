#include "ctopt/vpm.hpp"

#include <cmath>
#include <string>

#include "ctopt/errors.hpp"
#include "ctopt/plant.hpp"

namespace ctopt {

namespace {

// splitmix64: cheap, well-mixed counter generator. Keeping the generator
// hand-rolled makes noise streams reproducible across standard libraries.
std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// uniform in (0, 1]
double uniform_open0(NoiseRng& rng) {
    const std::uint64_t bits = splitmix64_next(rng);
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

} // namespace

NoiseRng noise_stream(std::uint64_t seed, std::uint64_t frame_index) {
    // Decorrelate the per-frame streams by running the mixer over the pair.
    std::uint64_t s = seed ^ 0xA0761D6478BD642Full;
    (void)splitmix64_next(s);
    s ^= (frame_index + 1) * 0xE7037ED1A0B428DBull;
    (void)splitmix64_next(s);
    return s;
}

double draw_standard_normal(NoiseRng& rng) {
    // Box-Muller, one draw per call (the sine partner is discarded so the
    // stream state stays a plain counter).
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = uniform_open0(rng);
    const double u2 = uniform_open0(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

SensorFrame inject_noise(const SensorFrame& frame, const NoiseSpec& spec,
                         NoiseRng& rng) {
    if (spec.std_dev_c < 0.0) {
        throw model_error("inject_noise: std_dev must be >= 0");
    }
    SensorFrame out = frame;
    if (spec.std_dev_c == 0.0 && spec.mean_c == 0.0) {
        return out;
    }
    // Fixed draw order keeps a stream reproducible regardless of targets.
    const double d_evap_e = spec.mean_c + spec.std_dev_c * draw_standard_normal(rng);
    const double d_evap_l = spec.mean_c + spec.std_dev_c * draw_standard_normal(rng);
    const double d_cond_e = spec.mean_c + spec.std_dev_c * draw_standard_normal(rng);
    if (spec.target_evap_entering) out.t_evap_e_c += d_evap_e;
    if (spec.target_evap_leaving) out.t_evap_l_c += d_evap_l;
    if (spec.target_cond_entering) out.t_cond_e_c += d_cond_e;
    return out;
}

double vpm_chiller_power(const SensorFrame& frame, const VpmConfig& cfg) {
    const double flow = frame.flow_valid ? frame.m_chw_kg_s : cfg.assumed_flow_kg_s;
    const ChillerResult r =
        chiller_power(frame.t_evap_e_c, frame.t_evap_l_c, frame.t_cond_e_c, flow,
                      cfg.curves, cfg.cp_water_kj_kg_k, cfg.plr_min, cfg.plr_max);
    return cfg.correction_factor * r.p_chiller_kw;
}

double vpm_fan_power(const SensorFrame& frame, const VpmConfig& cfg) {
    return fan_power(cfg.fan_hp, frame.fan_speed_pct);
}

double calibrate_correction_factor(const std::vector<double>& estimates,
                                   const std::vector<double>& metered) {
    if (estimates.empty() || estimates.size() != metered.size()) {
        throw model_error("calibrate_correction_factor: series must be non-empty "
                          "and of equal length");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        num += estimates[i] * metered[i];
        den += estimates[i] * estimates[i];
    }
    if (!(den > 0.0)) {
        throw model_error("calibrate_correction_factor: estimate series is all zero");
    }
    return num / den;
}

std::vector<double> smooth_series(const std::vector<double>& values,
                                  std::size_t window) {
    if (window == 0 || window % 2 == 0) {
        throw model_error("smooth_series: window must be odd and >= 1 (got " +
                          std::to_string(window) + ")");
    }
    if (window == 1) {
        return values;
    }
    const std::size_t half = window / 2;
    const std::size_t n = values.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) sum += values[j];
        out[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

} // namespace ctopt
