#ifndef CTOPT_VPM_HPP
#define CTOPT_VPM_HPP

#include <cstdint>
#include <vector>

#include "ctopt/chiller.hpp"

namespace ctopt {

// Sensor snapshot feeding the virtual power meters. flow_valid marks whether
// the chilled-water flow sensor exists; when it does not, the meter falls
// back to the configured assumed flow.
struct SensorFrame {
    double t_evap_e_c = 0.0;
    double t_evap_l_c = 0.0;
    double t_cond_e_c = 0.0;
    double m_chw_kg_s = 0.0;
    bool flow_valid = true;
    double fan_speed_pct = 0.0;
    double timestamp_s = 0.0;
};

struct VpmConfig {
    ChillerCurves curves;
    double fan_hp = 0.0;
    double correction_factor = 1.0;  // multiplicative, fit by least squares
    double assumed_flow_kg_s = 0.0;  // used when the flow sensor is absent
    double cp_water_kj_kg_k = 4.186;
    double plr_min = 0.1;
    double plr_max = 1.0;
};

// Zero-mean-by-default Gaussian perturbation of selected temperature sensors.
struct NoiseSpec {
    double mean_c = 0.0;
    double std_dev_c = 0.0;
    std::uint64_t seed = 0;
    bool target_evap_entering = false;
    bool target_evap_leaving = false;
    bool target_cond_entering = false;
};

using NoiseRng = std::uint64_t;  // splittable counter-style generator state

// Independent stream for one frame index; streams are pre-split so frames
// can be processed in any order (or in parallel) with identical results.
NoiseRng noise_stream(std::uint64_t seed, std::uint64_t frame_index);

// Standard normal draw (Box-Muller over the stream's uniform output); used
// by inject_noise and exposed for tests.
double draw_standard_normal(NoiseRng& rng);

// Perturb the targeted temperature fields with independent Gaussian draws.
// Deterministic for a given stream; non-targeted fields pass through.
SensorFrame inject_noise(const SensorFrame& frame, const NoiseSpec& spec,
                         NoiseRng& rng);

// Chiller meter: the exact chiller_power computation over the frame's
// sensors (assumed flow when absent), scaled by the correction factor.
double vpm_chiller_power(const SensorFrame& frame, const VpmConfig& cfg);

// Fan meter: cube law over the reported speed.
double vpm_fan_power(const SensorFrame& frame, const VpmConfig& cfg);

// Least-squares scalar k minimizing sum((k*estimate - metered)^2):
// k = sum(e*m) / sum(e^2). Throws model_error for empty/mismatched series or
// an all-zero estimate series.
double calibrate_correction_factor(const std::vector<double>& estimates,
                                   const std::vector<double>& metered);

// Centered moving average with an odd window; edges shrink the window to the
// available samples. Output length equals input length.
std::vector<double> smooth_series(const std::vector<double>& values,
                                  std::size_t window);

} // namespace ctopt

#endif // CTOPT_VPM_HPP
