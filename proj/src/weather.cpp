#include "ctopt/weather.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>

#include "ctopt/csv.hpp"
#include "ctopt/errors.hpp"

namespace ctopt {

namespace {

double parse_field(const std::string& text, const std::string& what, int line) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw config_error("weather: malformed " + what + " '" + text +
                           "' at line " + std::to_string(line));
    }
    return value;
}

} // namespace

WeatherSeries::WeatherSeries(std::vector<WeatherSample> samples)
    : samples_(std::move(samples)) {
    if (samples_.empty()) {
        throw config_error("weather series is empty");
    }
}

WeatherSample WeatherSeries::sample_at(double t_s) const {
    if (t_s < start_s() || t_s > end_s()) {
        throw config_error("weather series does not cover t=" + std::to_string(t_s) +
                           " s (range " + std::to_string(start_s()) + ".." +
                           std::to_string(end_s()) + ")");
    }
    // Find the first row at or after t, then interpolate from its predecessor.
    const auto it = std::lower_bound(
        samples_.begin(), samples_.end(), t_s,
        [](const WeatherSample& s, double t) { return s.timestamp_s < t; });
    const std::size_t hi = static_cast<std::size_t>(it - samples_.begin());
    if (samples_[hi].timestamp_s == t_s || hi == 0) {
        WeatherSample s = samples_[hi];
        s.timestamp_s = t_s;
        return s;
    }
    const WeatherSample& a = samples_[hi - 1];
    const WeatherSample& b = samples_[hi];
    const double w = (t_s - a.timestamp_s) / (b.timestamp_s - a.timestamp_s);
    WeatherSample s;
    s.timestamp_s = t_s;
    s.t_db_c = a.t_db_c + w * (b.t_db_c - a.t_db_c);
    s.t_wb_c = a.t_wb_c + w * (b.t_wb_c - a.t_wb_c);
    return s;
}

WeatherSeries load_weather(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("weather file not found: " + path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw config_error("weather file is empty: " + path.string());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp_s,t_db_c,t_wb_c") {
        throw config_error("weather file " + path.string() +
                           ": expected header 'timestamp_s,t_db_c,t_wb_c', got '" +
                           line + "'");
    }

    std::vector<WeatherSample> samples;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw config_error("weather: malformed row (expected 3 fields, got " +
                               std::to_string(fields.size()) + ") at line " +
                               std::to_string(line_no));
        }
        WeatherSample s;
        s.timestamp_s = parse_field(fields[0], "timestamp", line_no);
        s.t_db_c = parse_field(fields[1], "dry bulb", line_no);
        s.t_wb_c = parse_field(fields[2], "wet bulb", line_no);
        if (s.t_wb_c > s.t_db_c) {
            throw config_error("weather: wet bulb " + fields[2] +
                               " exceeds dry bulb " + fields[1] + " at line " +
                               std::to_string(line_no));
        }
        if (!samples.empty() && s.timestamp_s <= samples.back().timestamp_s) {
            throw config_error("weather: non-monotone timestamp at line " +
                               std::to_string(line_no));
        }
        samples.push_back(s);
    }
    return WeatherSeries(std::move(samples));
}

} // namespace ctopt
