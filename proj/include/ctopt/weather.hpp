#ifndef CTOPT_WEATHER_HPP
#define CTOPT_WEATHER_HPP

#include <filesystem>
#include <vector>

#include "ctopt/plant.hpp"

namespace ctopt {

class WeatherSeries {
public:
    explicit WeatherSeries(std::vector<WeatherSample> samples);

    // Linear interpolation between the bracketing rows. Throws config_error
    // outside the covered time range.
    WeatherSample sample_at(double t_s) const;

    double start_s() const { return samples_.front().timestamp_s; }
    double end_s() const { return samples_.back().timestamp_s; }
    const std::vector<WeatherSample>& samples() const { return samples_; }

private:
    std::vector<WeatherSample> samples_;
};

// CSV with header "timestamp_s,t_db_c,t_wb_c". Rows must be strictly
// increasing in time and keep wet bulb <= dry bulb; violations report the
// offending line number.
WeatherSeries load_weather(const std::filesystem::path& path);

} // namespace ctopt

#endif // CTOPT_WEATHER_HPP
