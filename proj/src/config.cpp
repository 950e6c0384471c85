#include "ctopt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "ctopt/errors.hpp"

namespace ctopt {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

// Strip a trailing comment: '#' at the start or preceded by whitespace.
std::string strip_comment(const std::string& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '#' && (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t')) {
            return s.substr(0, i);
        }
    }
    return s;
}

} // namespace

KvFile KvFile::parse(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("config file not found: " + path.string());
    }

    KvFile file;
    file.path_ = path;

    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;

        if (body.front() == '[') {
            if (body.back() != ']' || body.size() < 3) {
                throw config_error(path.string() + ":" + std::to_string(line_no) +
                                   ": malformed section header '" + body + "'");
            }
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty()) {
                throw config_error(path.string() + ":" + std::to_string(line_no) +
                                   ": empty section name");
            }
            file.sections_[section];  // a section may legitimately stay empty
            continue;
        }

        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw config_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 'key = value', got '" + body + "'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            throw config_error(path.string() + ":" + std::to_string(line_no) +
                               ": empty key");
        }
        auto& sec = file.sections_[section];
        if (sec.contains(key)) {
            throw config_error(path.string() + ":" + std::to_string(line_no) +
                               ": duplicate key '" + key + "'");
        }
        sec[key] = Entry{value, line_no, false};
    }
    return file;
}

bool KvFile::has_section(const std::string& section) const {
    return sections_.contains(section);
}

bool KvFile::has_key(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

const KvFile::Entry* KvFile::find(const std::string& section,
                                  const std::string& key) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end()) return nullptr;
    const auto it = sec->second.find(key);
    return it == sec->second.end() ? nullptr : &it->second;
}

std::string KvFile::locate(const std::string& section, const std::string& key) const {
    return section.empty() ? "'" + key + "'" : "'" + key + "' in [" + section + "]";
}

const KvFile::Entry& KvFile::require(const std::string& section,
                                     const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) {
        throw config_error(path_.string() + ": missing required key " +
                           locate(section, key));
    }
    e->used = true;
    return *e;
}

std::string KvFile::get_string(const std::string& section, const std::string& key) const {
    return require(section, key).value;
}

std::string KvFile::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    e->used = true;
    return e->value;
}

double KvFile::get_double(const std::string& section, const std::string& key) const {
    const Entry& e = require(section, key);
    double value = 0.0;
    const char* first = e.value.data();
    const char* last = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw config_error(path_.string() + ":" + std::to_string(e.line) +
                           ": expected a number for " + locate(section, key) +
                           ", got '" + e.value + "'");
    }
    if (!std::isfinite(value)) {
        throw config_error(path_.string() + ":" + std::to_string(e.line) +
                           ": non-finite value for " + locate(section, key));
    }
    return value;
}

double KvFile::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
    return has_key(section, key) ? get_double(section, key) : fallback;
}

std::int64_t KvFile::get_int(const std::string& section, const std::string& key) const {
    const Entry& e = require(section, key);
    std::int64_t value = 0;
    const char* first = e.value.data();
    const char* last = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw config_error(path_.string() + ":" + std::to_string(e.line) +
                           ": expected an integer for " + locate(section, key) +
                           ", got '" + e.value + "'");
    }
    return value;
}

std::int64_t KvFile::get_int_or(const std::string& section, const std::string& key,
                                std::int64_t fallback) const {
    return has_key(section, key) ? get_int(section, key) : fallback;
}

void KvFile::require_all_consumed() const {
    for (const auto& [section, entries] : sections_) {
        for (const auto& [key, entry] : entries) {
            if (!entry.used) {
                throw config_error(path_.string() + ":" + std::to_string(entry.line) +
                                   ": unknown key " + locate(section, key));
            }
        }
    }
}

// ---- chiller curve loading ----

namespace {

// Minimum of c0 + c1 x + c2 x^2 over [lo, hi] (endpoints plus the interior
// vertex when it applies).
double quad_min_on(const std::array<double, 3>& c, double lo, double hi) {
    const auto eval = [&c](double x) { return c[0] + c[1] * x + c[2] * x * x; };
    double m = std::min(eval(lo), eval(hi));
    if (c[2] != 0.0) {
        const double vertex = -c[1] / (2.0 * c[2]);
        if (c[2] > 0.0 && vertex > lo && vertex < hi) {
            m = std::min(m, eval(vertex));
        }
    }
    return m;
}

} // namespace

ChillerCurves load_chiller_curves(const KvFile& file, const std::string& section,
                                  double plr_min) {
    ChillerCurves curves;
    const char* a_keys[6] = {"a0", "a1", "a2", "a3", "a4", "a5"};
    const char* b_keys[6] = {"b0", "b1", "b2", "b3", "b4", "b5"};
    const char* c_keys[3] = {"c0", "c1", "c2"};
    for (int i = 0; i < 6; ++i) curves.a[i] = file.get_double(section, a_keys[i]);
    for (int i = 0; i < 6; ++i) curves.b[i] = file.get_double(section, b_keys[i]);
    for (int i = 0; i < 3; ++i) curves.c[i] = file.get_double(section, c_keys[i]);
    curves.c_ref_kw = file.get_double(section, "c_ref_kw");
    curves.cop_ref = file.get_double(section, "cop_ref");

    if (!(curves.c_ref_kw > 0.0)) {
        throw config_error(file.path().string() +
                           ": chiller curves: c_ref_kw must be > 0");
    }
    if (!(curves.cop_ref > 0.0)) {
        throw config_error(file.path().string() +
                           ": chiller curves: cop_ref must be > 0");
    }
    if (!(quad_min_on(curves.c, plr_min, 1.0) > 0.0)) {
        throw config_error(file.path().string() +
                           ": chiller curves: psi3 must stay > 0 over PLR [" +
                           std::to_string(plr_min) + ", 1]");
    }
    return curves;
}

ChillerCurves load_chiller_curves_file(const std::filesystem::path& path,
                                       double plr_min) {
    const KvFile file = KvFile::parse(path);
    ChillerCurves curves = load_chiller_curves(file, "", plr_min);
    file.require_all_consumed();
    return curves;
}

// ---- scenario loading ----

const char* to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::esc: return "esc";
        case ControllerKind::fixed: return "fixed";
        case ControllerKind::pid: return "pid";
    }
    return "?";
}

const char* to_string(CostSource source) {
    return source == CostSource::true_power ? "true" : "vpm";
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base_dir,
                              const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base_dir / p;
}

NoiseSpec load_noise(const KvFile& file, std::uint64_t seed) {
    NoiseSpec spec;
    spec.mean_c = file.get_double_or("noise", "mean", 0.0);
    spec.std_dev_c = file.get_double("noise", "std_dev");
    if (spec.std_dev_c < 0.0) {
        throw config_error(file.path().string() + ": [noise] std_dev must be >= 0");
    }
    spec.seed = static_cast<std::uint64_t>(
        file.get_int_or("noise", "seed", static_cast<std::int64_t>(seed)));

    std::string targets = file.get_string("noise", "targets");
    std::size_t pos = 0;
    while (pos <= targets.size()) {
        const auto comma = targets.find(',', pos);
        const std::string item = trim(
            comma == std::string::npos ? targets.substr(pos)
                                       : targets.substr(pos, comma - pos));
        if (item == "evap_entering") {
            spec.target_evap_entering = true;
        } else if (item == "evap_leaving") {
            spec.target_evap_leaving = true;
        } else if (item == "cond_entering") {
            spec.target_cond_entering = true;
        } else if (!item.empty()) {
            throw config_error(file.path().string() + ": [noise] unknown target '" +
                               item + "' (expected evap_entering, evap_leaving, "
                               "cond_entering)");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return spec;
}

} // namespace

Scenario load_scenario(const std::filesystem::path& path) {
    const KvFile file = KvFile::parse(path);
    const std::filesystem::path base_dir =
        std::filesystem::absolute(path).parent_path();

    const std::int64_t schema = file.get_int("", "schema");
    if (schema != 1) {
        throw config_error(path.string() + ": unsupported schema " +
                           std::to_string(schema) + " (expected 1)");
    }

    Scenario sc;
    sc.name = file.get_string("", "name");
    if (sc.name.empty() ||
        sc.name.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                                  "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                  "0123456789_.-") != std::string::npos) {
        throw config_error(path.string() + ": name '" + sc.name +
                           "' must be non-empty and filename-safe "
                           "(letters, digits, '_', '.', '-')");
    }
    sc.weather_path = resolve(base_dir, file.get_string("", "weather"));
    sc.dt_s = file.get_double_or("", "dt", 60.0);
    sc.duration_s = file.get_double("", "duration");
    sc.seed = static_cast<std::uint64_t>(file.get_int_or("", "seed", 0));

    if (!(sc.dt_s > 0.0)) {
        throw config_error(path.string() + ": dt must be > 0 s");
    }
    if (sc.duration_s < sc.dt_s) {
        throw config_error(path.string() + ": duration must be >= dt");
    }
    if (!std::filesystem::exists(sc.weather_path)) {
        throw config_error(path.string() + ": weather file not found: " +
                           sc.weather_path.string());
    }

    const std::string controller = file.get_string("", "controller");
    if (controller == "esc") {
        sc.controller = ControllerKind::esc;
    } else if (controller == "fixed") {
        sc.controller = ControllerKind::fixed;
    } else if (controller == "pid") {
        sc.controller = ControllerKind::pid;
    } else {
        throw config_error(path.string() + ": controller must be esc|fixed|pid, got '" +
                           controller + "'");
    }

    const std::string cost = file.get_string_or("", "cost_source", "true");
    if (cost == "true") {
        sc.cost_source = CostSource::true_power;
    } else if (cost == "vpm") {
        sc.cost_source = CostSource::vpm;
    } else {
        throw config_error(path.string() + ": cost_source must be true|vpm, got '" +
                           cost + "'");
    }

    // [plant]
    PlantConfig& plant = sc.plant;
    plant.m_chw_kg_s = file.get_double("plant", "m_chw");
    plant.cp_water_kj_kg_k = file.get_double_or("plant", "cp_water", 4.186);
    plant.m_cond_kg_s = file.get_double("plant", "m_cond");
    plant.t_chws_setpoint_c = file.get_double("plant", "t_chws_setpoint");
    plant.p_cw_pump_kw = file.get_double("plant", "p_cw_pump");
    plant.p_chw_pump_kw = file.get_double("plant", "p_chw_pump");
    plant.p_ahu_kw = file.get_double("plant", "p_ahu");
    plant.fan_hp = file.get_double("plant", "fan_hp");
    plant.tower_eps0 = file.get_double("plant", "tower_eps0");
    plant.tower_eps1 = file.get_double("plant", "tower_eps1");
    plant.tower_exp = file.get_double_or("plant", "tower_exp", 1.0);
    plant.tau_plant_s = file.get_double_or("plant", "tau_plant", 183.0);
    plant.q_load_kw = file.get_double("plant", "q_load_kw");
    plant.load_weather_coeff = file.get_double_or("plant", "load_weather_coeff", 0.0);
    plant.load_t_ref_c = file.get_double_or("plant", "load_t_ref", 20.0);
    plant.plr_min = file.get_double_or("plant", "plr_min", 0.1);
    plant.plr_max = file.get_double_or("plant", "plr_max", 1.0);

    if (!(plant.tower_eps0 >= 0.0 && plant.tower_eps0 < plant.tower_eps1 &&
          plant.tower_eps1 <= 1.0)) {
        throw config_error(path.string() +
                           ": require 0 <= tower_eps0 < tower_eps1 <= 1");
    }
    if (!(plant.tau_plant_s > 0.0)) {
        throw config_error(path.string() + ": tau_plant must be > 0 s");
    }
    if (plant.m_chw_kg_s <= 0.0 || plant.m_cond_kg_s <= 0.0) {
        throw config_error(path.string() + ": water flows must be > 0 kg/s");
    }
    if (plant.p_cw_pump_kw < 0.0 || plant.p_chw_pump_kw < 0.0 ||
        plant.p_ahu_kw < 0.0 || plant.fan_hp < 0.0 || plant.q_load_kw < 0.0) {
        throw config_error(path.string() + ": powers and loads must be >= 0");
    }
    if (!(plant.plr_min >= 0.0 && plant.plr_min < plant.plr_max)) {
        throw config_error(path.string() + ": require 0 <= plr_min < plr_max");
    }

    // [chiller]: either a file reference or inline coefficients.
    if (file.has_key("chiller", "file")) {
        plant.curves = load_chiller_curves_file(
            resolve(base_dir, file.get_string("chiller", "file")), plant.plr_min);
    } else {
        plant.curves = load_chiller_curves(file, "chiller", plant.plr_min);
    }

    // [esc]
    sc.esc.tau_s = file.get_double_or("esc", "tau", 183.0);
    sc.esc.tau_f_s = file.get_double_or("esc", "tau_f", sc.esc.tau_s / 2.0);
    sc.esc.x_min_pct = file.get_double_or("esc", "x_min", 0.0);
    sc.esc.x_max_pct = file.get_double_or("esc", "x_max", 100.0);
    if (!(sc.esc.x_min_pct >= 0.0 && sc.esc.x_min_pct < sc.esc.x_max_pct &&
          sc.esc.x_max_pct <= 100.0)) {
        throw config_error(path.string() +
                           ": [esc] require 0 <= x_min < x_max <= 100");
    }

    // [fixed]
    sc.fixed.speed_pct = file.get_double_or("fixed", "speed", 100.0);
    if (!(sc.fixed.speed_pct >= 0.0 && sc.fixed.speed_pct <= 100.0)) {
        throw config_error(path.string() + ": [fixed] speed must be in [0, 100] %");
    }

    // [pid]
    sc.pid.t_cws_setpoint_c = file.get_double_or("pid", "t_cws_setpoint", 25.0);

    // [vpm]
    sc.vpm.curves = plant.curves;
    sc.vpm.fan_hp = file.get_double_or("vpm", "fan_hp", plant.fan_hp);
    sc.vpm.correction_factor = file.get_double_or("vpm", "correction_factor", 1.0);
    sc.vpm.assumed_flow_kg_s = file.get_double_or("vpm", "assumed_flow", plant.m_chw_kg_s);
    sc.vpm.cp_water_kj_kg_k = plant.cp_water_kj_kg_k;
    sc.vpm.plr_min = plant.plr_min;
    sc.vpm.plr_max = plant.plr_max;
    if (!(sc.vpm.correction_factor > 0.0)) {
        throw config_error(path.string() + ": [vpm] correction_factor must be > 0");
    }
    if (!(sc.vpm.assumed_flow_kg_s > 0.0)) {
        throw config_error(path.string() + ": [vpm] assumed_flow must be > 0");
    }
    const std::string flow_sensor =
        file.get_string_or("vpm", "flow_sensor", "present");
    if (flow_sensor == "present") {
        sc.vpm_flow_sensor_present = true;
    } else if (flow_sensor == "absent") {
        sc.vpm_flow_sensor_present = false;
    } else {
        throw config_error(path.string() +
                           ": [vpm] flow_sensor must be present|absent, got '" +
                           flow_sensor + "'");
    }

    // [noise] (optional)
    if (file.has_section("noise")) {
        sc.noise = load_noise(file, sc.seed);
    }

    file.require_all_consumed();
    return sc;
}

} // namespace ctopt
