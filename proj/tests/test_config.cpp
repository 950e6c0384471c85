#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "ctopt/config.hpp"
#include "ctopt/errors.hpp"
#include "ctopt/weather.hpp"

using namespace ctopt;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = CTOPT_DATA_DIR;

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "ctopt_config_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << content;
    return p;
}

} // namespace

TEST_CASE("weather: constant two-row file interpolates to a constant") {
    const fs::path p = write_temp("const.csv",
                                  "timestamp_s,t_db_c,t_wb_c\n"
                                  "0,30,25\n"
                                  "604800,30,25\n");
    const WeatherSeries w = load_weather(p);
    for (double t : {0.0, 1234.0, 300000.0, 604800.0}) {
        const WeatherSample s = w.sample_at(t);
        CHECK(s.t_db_c == 30.0);
        CHECK(s.t_wb_c == 25.0);
    }
}

TEST_CASE("weather: midpoint of two hourly rows is their average") {
    const fs::path p = write_temp("interp.csv",
                                  "timestamp_s,t_db_c,t_wb_c\n"
                                  "0,28,22\n"
                                  "3600,32,26\n");
    const WeatherSeries w = load_weather(p);
    const WeatherSample mid = w.sample_at(1800.0);
    CHECK(mid.t_db_c == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(mid.t_wb_c == doctest::Approx(24.0).epsilon(1e-12));
    // exact at the rows themselves
    CHECK(w.sample_at(3600.0).t_wb_c == 26.0);
}

TEST_CASE("weather: wet bulb above dry bulb is rejected with the line number") {
    const fs::path p = write_temp("wb.csv",
                                  "timestamp_s,t_db_c,t_wb_c\n"
                                  "0,30,25\n"
                                  "3600,25,30\n");
    CHECK_THROWS_WITH_AS(load_weather(p), doctest::Contains("line 3"), config_error);
}

TEST_CASE("weather: non-monotone timestamps and malformed rows are rejected") {
    const fs::path bad_t = write_temp("mono.csv",
                                      "timestamp_s,t_db_c,t_wb_c\n"
                                      "3600,30,25\n"
                                      "3600,30,25\n");
    CHECK_THROWS_WITH_AS(load_weather(bad_t), doctest::Contains("non-monotone"),
                         config_error);

    const fs::path bad_row = write_temp("row.csv",
                                        "timestamp_s,t_db_c,t_wb_c\n"
                                        "0,30\n");
    CHECK_THROWS_WITH_AS(load_weather(bad_row), doctest::Contains("line 2"),
                         config_error);

    const fs::path bad_num = write_temp("num.csv",
                                        "timestamp_s,t_db_c,t_wb_c\n"
                                        "0,thirty,25\n");
    CHECK_THROWS_AS(load_weather(bad_num), config_error);

    const fs::path bad_header = write_temp("hdr.csv", "time,db,wb\n0,30,25\n");
    CHECK_THROWS_AS(load_weather(bad_header), config_error);
}

TEST_CASE("weather: sampling outside the covered range is an error") {
    const fs::path p = write_temp("range.csv",
                                  "timestamp_s,t_db_c,t_wb_c\n"
                                  "0,30,25\n"
                                  "3600,30,25\n");
    const WeatherSeries w = load_weather(p);
    CHECK_THROWS_AS(w.sample_at(-1.0), config_error);
    CHECK_THROWS_AS(w.sample_at(3601.0), config_error);
}

TEST_CASE("key-value files: sections, comments, typed access") {
    const fs::path p = write_temp("kv.conf",
                                  "# top comment\n"
                                  "alpha = 1.5  # trailing comment\n"
                                  "name = plant one\n"
                                  "[sec]\n"
                                  "beta = -2\n");
    const KvFile f = KvFile::parse(p);
    CHECK(f.get_double("", "alpha") == 1.5);
    CHECK(f.get_string("", "name") == "plant one");
    CHECK(f.get_int("sec", "beta") == -2);
    CHECK(f.get_double_or("sec", "missing", 7.0) == 7.0);
    f.require_all_consumed();
}

TEST_CASE("key-value files: duplicate, missing and malformed keys") {
    const fs::path dup = write_temp("dup.conf", "a = 1\na = 2\n");
    CHECK_THROWS_WITH_AS(KvFile::parse(dup), doctest::Contains("duplicate"),
                         config_error);

    const fs::path p = write_temp("miss.conf", "a = 1\nbad = oops\n");
    const KvFile f = KvFile::parse(p);
    CHECK_THROWS_WITH_AS(f.get_double("", "b"), doctest::Contains("'b'"), config_error);
    CHECK_THROWS_WITH_AS(f.get_double("", "bad"), doctest::Contains("number"),
                         config_error);
}

TEST_CASE("key-value files: unconsumed keys are reported as unknown") {
    const fs::path p = write_temp("unk.conf", "known = 1\nmistyped_kee = 2\n");
    const KvFile f = KvFile::parse(p);
    CHECK(f.get_double("", "known") == 1.0);
    CHECK_THROWS_WITH_AS(f.require_all_consumed(),
                         doctest::Contains("mistyped_kee"), config_error);
}

TEST_CASE("chiller curve file: shipped defaults load and are self-consistent") {
    const ChillerCurves cv =
        load_chiller_curves_file(kDataDir / "chiller_doe2_centrifugal.conf", 0.1);
    CHECK(cv.c_ref_kw == 450.0);
    CHECK(cv.cop_ref == 5.5);

    // at the rating point with the load matched to the available capacity,
    // power lands within 2% of c_ref/cop_ref
    const double psi1 = chiller_capacity_psi1(6.67, 29.44, cv);
    const double q_avail = cv.c_ref_kw * psi1;
    const double m = 14.3;
    const double dT = q_avail / (m * 4.186);
    const ChillerResult r =
        chiller_power(6.67 + dT, 6.67, 29.44, m, cv, 4.186, 0.1, 1.0);
    CHECK(r.plr == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.p_chiller_kw ==
          doctest::Approx(cv.c_ref_kw / cv.cop_ref).epsilon(0.02));
}

TEST_CASE("chiller curve file: missing coefficient is reported by name") {
    std::string body;
    {
        std::ifstream in(kDataDir / "chiller_doe2_centrifugal.conf");
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("b3", 0) == 0) continue;  // drop the b3 line
            body += line + "\n";
        }
    }
    const fs::path p = write_temp("no_b3.conf", body);
    CHECK_THROWS_WITH_AS(load_chiller_curves_file(p, 0.1), doctest::Contains("b3"),
                         config_error);
}

TEST_CASE("chiller curve file: invalid invariants are rejected") {
    const std::string base =
        "a0 = 1\na1 = 0\na2 = 0\na3 = 0\na4 = 0\na5 = 0\n"
        "b0 = 1\nb1 = 0\nb2 = 0\nb3 = 0\nb4 = 0\nb5 = 0\n";
    const fs::path neg_ref = write_temp(
        "negref.conf", base + "c0 = 1\nc1 = 0\nc2 = 0\nc_ref_kw = 0\ncop_ref = 5\n");
    CHECK_THROWS_WITH_AS(load_chiller_curves_file(neg_ref, 0.1),
                         doctest::Contains("c_ref"), config_error);

    // psi3 dips negative inside the operating range
    const fs::path bad_psi3 = write_temp(
        "psi3.conf", base + "c0 = 0.1\nc1 = -1\nc2 = 0\nc_ref_kw = 450\ncop_ref = 5\n");
    CHECK_THROWS_WITH_AS(load_chiller_curves_file(bad_psi3,
                                                  0.1),
                         doctest::Contains("psi3"), config_error);
}

TEST_CASE("scenario: shipped humid configuration parses with all fields") {
    const Scenario sc = load_scenario(kDataDir / "humid.conf");
    CHECK(sc.name == "humid");
    CHECK(sc.controller == ControllerKind::esc);
    CHECK(sc.cost_source == CostSource::true_power);
    CHECK(sc.dt_s == 60.0);
    CHECK(sc.duration_s == 604800.0);
    CHECK(sc.seed == 42);
    CHECK(sc.esc.tau_s == 183.0);
    CHECK(sc.esc.tau_f_s == 91.5);
    CHECK(sc.plant.q_load_kw == 300.0);
    CHECK(sc.plant.tower_eps0 == 0.30);
    CHECK(sc.plant.curves.cop_ref == 5.5);
    CHECK(sc.vpm.assumed_flow_kg_s == sc.plant.m_chw_kg_s);
    CHECK(!sc.noise.has_value());
    CHECK(fs::exists(sc.weather_path));
}

TEST_CASE("scenario: noise section parses targets and inherits the seed") {
    const Scenario sc = load_scenario(kDataDir / "humid_noisy.conf");
    REQUIRE(sc.noise.has_value());
    CHECK(sc.noise->std_dev_c == 5.0);
    CHECK(sc.noise->mean_c == 0.0);
    CHECK(sc.noise->seed == sc.seed);
    CHECK(sc.noise->target_evap_entering);
    CHECK(sc.noise->target_evap_leaving);
    CHECK(sc.noise->target_cond_entering);
}

namespace {

std::string minimal_scenario_body(const fs::path& weather) {
    return "schema = 1\n"
           "name = mini\n"
           "weather = " + weather.string() + "\n"
           "controller = fixed\n"
           "duration = 3600\n"
           "[fixed]\n"
           "speed = 50\n"
           "[plant]\n"
           "m_chw = 14.3\n"
           "m_cond = 17.0\n"
           "t_chws_setpoint = 6.7\n"
           "p_cw_pump = 7.5\n"
           "p_chw_pump = 5.5\n"
           "p_ahu = 10\n"
           "fan_hp = 30\n"
           "tower_eps0 = 0.3\n"
           "tower_eps1 = 0.85\n"
           "q_load_kw = 300\n"
           "[chiller]\n"
           "a0 = 1\na1 = 0\na2 = 0\na3 = 0\na4 = 0\na5 = 0\n"
           "b0 = 1\nb1 = 0\nb2 = 0\nb3 = 0\nb4 = 0\nb5 = 0\n"
           "c0 = 1\nc1 = 0\nc2 = 0\n"
           "c_ref_kw = 450\ncop_ref = 5.5\n";
}

} // namespace

TEST_CASE("scenario: unknown keys, bad schema and bad enums are rejected") {
    const fs::path weather = write_temp("mini_weather.csv",
                                        "timestamp_s,t_db_c,t_wb_c\n"
                                        "0,30,25\n"
                                        "7200,30,25\n");
    const std::string body = minimal_scenario_body(weather);

    CHECK_NOTHROW(load_scenario(write_temp("ok.conf", body)));

    CHECK_THROWS_WITH_AS(
        load_scenario(write_temp("typo.conf", body + "[esc]\ntau_ff = 3\n")),
        doctest::Contains("tau_ff"), config_error);

    std::string no_schema = body;
    no_schema.erase(0, no_schema.find('\n') + 1);
    CHECK_THROWS_WITH_AS(load_scenario(write_temp("nos.conf", no_schema)),
                         doctest::Contains("schema"), config_error);

    std::string schema2 = body;
    schema2.replace(schema2.find("schema = 1"), 10, "schema = 2");
    CHECK_THROWS_WITH_AS(load_scenario(write_temp("s2.conf", schema2)),
                         doctest::Contains("schema"), config_error);

    std::string bad_ctrl = body;
    bad_ctrl.replace(bad_ctrl.find("controller = fixed"), 18, "controller = mpc42");
    CHECK_THROWS_WITH_AS(load_scenario(write_temp("ctrl.conf", bad_ctrl)),
                         doctest::Contains("controller"), config_error);

    std::string bad_name = body;
    bad_name.replace(bad_name.find("name = mini"), 11, "name = ../mini");
    CHECK_THROWS_WITH_AS(load_scenario(write_temp("name.conf", bad_name)),
                         doctest::Contains("filename-safe"), config_error);

    std::string short_run = body;
    short_run.replace(short_run.find("duration = 3600"), 15, "duration = 10");
    CHECK_THROWS_AS(load_scenario(write_temp("dur.conf", short_run)), config_error);
}
