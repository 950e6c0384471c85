#ifndef CTOPT_CONFIG_HPP
#define CTOPT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctopt/baseline.hpp"
#include "ctopt/chiller.hpp"
#include "ctopt/plant.hpp"
#include "ctopt/vpm.hpp"

namespace ctopt {

// Flat "key = value" config file with [section] headers, '#' comments and a
// consumed-key audit so typos surface as errors instead of silently falling
// back to defaults.
class KvFile {
public:
    static KvFile parse(const std::filesystem::path& path);

    bool has_section(const std::string& section) const;
    bool has_key(const std::string& section, const std::string& key) const;

    // Typed getters; the *_or variants supply a default for absent keys.
    // Each access marks the key consumed.
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const;

    // Throws config_error naming the first never-consumed key and its line.
    void require_all_consumed() const;

    const std::filesystem::path& path() const { return path_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };

    const Entry* find(const std::string& section, const std::string& key) const;
    const Entry& require(const std::string& section, const std::string& key) const;
    std::string locate(const std::string& section, const std::string& key) const;

    std::filesystem::path path_;
    // section -> key -> entry; "" holds top-level keys
    std::map<std::string, std::map<std::string, Entry>> sections_;
};

// Reads a0..a5, b0..b5, c0..c2, c_ref_kw, cop_ref from one section and
// validates the invariants (finite values, positive reference capacity and
// COP, psi3 > 0 over [plr_min, 1]). Missing fields are reported by name.
ChillerCurves load_chiller_curves(const KvFile& file, const std::string& section,
                                  double plr_min);

// Standalone curve file: same keys at top level.
ChillerCurves load_chiller_curves_file(const std::filesystem::path& path,
                                       double plr_min);

enum class ControllerKind { esc, fixed, pid };
enum class CostSource { true_power, vpm };

struct EscInputs {
    double tau_s = 183.0;
    double tau_f_s = 91.5;  // defaults to tau/2 when not configured
    double x_min_pct = 0.0;
    double x_max_pct = 100.0;
};

struct Scenario {
    std::string name;
    std::filesystem::path weather_path;
    ControllerKind controller = ControllerKind::esc;
    FixedSpeedConfig fixed;
    IdealPidConfig pid;
    EscInputs esc;
    PlantConfig plant;
    VpmConfig vpm;
    bool vpm_flow_sensor_present = true;
    std::optional<NoiseSpec> noise;
    double dt_s = 60.0;
    double duration_s = 0.0;
    std::uint64_t seed = 0;
    CostSource cost_source = CostSource::true_power;
};

// Parses and validates a scenario file (schema = 1). Relative paths resolve
// against the scenario file's directory. Unknown keys are errors.
Scenario load_scenario(const std::filesystem::path& path);

const char* to_string(ControllerKind kind);
const char* to_string(CostSource source);

} // namespace ctopt

#endif // CTOPT_CONFIG_HPP
