#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ctopt/errors.hpp"
#include "ctopt/esc.hpp"

using namespace ctopt;

TEST_CASE("tuning derives dwell and gain from the time constant") {
    const EscConfig cfg = configure_esc(183.0, 91.5, 60.0, 0.0, 100.0);
    CHECK(cfg.dwell_limit_s == 274.5);
    CHECK(cfg.k_gain_pct == doctest::Approx(6000.0 / 1372.5).epsilon(1e-15));
    CHECK(std::abs(cfg.k_gain_pct - 4.3716) < 5e-5);
}

TEST_CASE("tuning unit-cancellation case") {
    const EscConfig cfg = configure_esc(1.0, 0.0, 5.0, 0.0, 1.0);
    CHECK(cfg.dwell_limit_s == 1.0);
    CHECK(cfg.k_gain_pct == 1.0);
}

TEST_CASE("tuning rejects bad parameters by name") {
    CHECK_THROWS_WITH_AS(configure_esc(0.0, 91.5, 60.0, 0.0, 100.0),
                         doctest::Contains("tau"), config_error);
    CHECK_THROWS_WITH_AS(configure_esc(183.0, -1.0, 60.0, 0.0, 100.0),
                         doctest::Contains("tau_f"), config_error);
    CHECK_THROWS_WITH_AS(configure_esc(183.0, 91.5, 0.0, 0.0, 100.0),
                         doctest::Contains("dt"), config_error);
    CHECK_THROWS_WITH_AS(configure_esc(183.0, 91.5, 60.0, 50.0, 50.0),
                         doctest::Contains("x_min"), config_error);
}

TEST_CASE("first update seeds the filter and moves by one gain step") {
    const EscConfig cfg = configure_esc(183.0, 91.5, 60.0, 0.0, 100.0);
    EscState s0 = make_initial_esc_state(cfg);
    CHECK(s0.x_pct == 50.0);
    CHECK(s0.relay_sign == 1);

    const EscStepResult r = esc_step(cfg, s0, 100.0);
    CHECK(r.state.j_filtered_kw == 100.0);
    CHECK(r.state.j_filtered_prev_kw == 100.0);
    CHECK(r.state.relay_sign == 1);  // zero gradient holds the relay
    CHECK(r.x_command_pct == doctest::Approx(50.0 + cfg.k_gain_pct).epsilon(1e-15));
    CHECK(r.state.dwell_elapsed_s == 60.0);
}

TEST_CASE("relay flips on rising cost only after the dwell") {
    const EscConfig cfg = configure_esc(183.0, 91.5, 60.0, 0.0, 100.0);
    EscState s;
    s.relay_sign = +1;
    s.x_pct = 50.0;
    s.j_filtered_kw = 100.0;
    s.j_filtered_prev_kw = 100.0;
    s.initialized = true;

    SUBCASE("dwell satisfied: flip and reset") {
        s.dwell_elapsed_s = cfg.dwell_limit_s;
        const EscStepResult r = esc_step(cfg, s, 110.0);
        CHECK(r.state.relay_sign == -1);
        CHECK(r.state.dwell_elapsed_s == 0.0);
        CHECK(r.x_command_pct == doctest::Approx(50.0 - cfg.k_gain_pct));
    }
    SUBCASE("dwell not yet elapsed: hold and accumulate") {
        s.dwell_elapsed_s = cfg.dwell_limit_s - 60.0;
        const EscStepResult r = esc_step(cfg, s, 110.0);
        CHECK(r.state.relay_sign == +1);
        CHECK(r.state.dwell_elapsed_s == cfg.dwell_limit_s);
    }
    SUBCASE("falling cost: hold regardless of dwell") {
        s.dwell_elapsed_s = 10.0 * cfg.dwell_limit_s;
        const EscStepResult r = esc_step(cfg, s, 90.0);
        CHECK(r.state.relay_sign == +1);
    }
    SUBCASE("gradient inside the epsilon band reads as flat") {
        s.dwell_elapsed_s = cfg.dwell_limit_s;
        const EscStepResult r = esc_step(cfg, s, 100.0 + 1e-12);
        CHECK(r.state.relay_sign == +1);
    }
}

TEST_CASE("command saturates at the actuator bounds") {
    const EscConfig cfg = configure_esc(183.0, 91.5, 60.0, 0.0, 100.0);
    EscState s;
    s.relay_sign = +1;
    s.x_pct = 100.0;
    s.j_filtered_kw = 50.0;
    s.j_filtered_prev_kw = 50.0;
    s.initialized = true;
    const EscStepResult r = esc_step(cfg, s, 50.0);
    CHECK(r.x_command_pct == 100.0);
}

TEST_CASE("constant cost ramps the command one gain step at a time") {
    // Hand simulation: zero gradient never flips the relay, so x climbs by
    // exactly k_gain each step until it clamps.
    const EscConfig cfg = configure_esc(183.0, 91.5, 60.0, 0.0, 100.0);
    EscState s = make_initial_esc_state(cfg);
    double expected = 50.0;
    for (int i = 0; i < 10; ++i) {
        const EscStepResult r = esc_step(cfg, s, 321.5);
        s = r.state;
        expected = std::min(expected + cfg.k_gain_pct, 100.0);
        CHECK(r.x_command_pct == doctest::Approx(expected).epsilon(1e-14));
        CHECK(s.relay_sign == 1);
    }
}

TEST_CASE("non-finite cost is rejected") {
    const EscConfig cfg = configure_esc(183.0, 91.5, 60.0, 0.0, 100.0);
    const EscState s = make_initial_esc_state(cfg);
    CHECK_THROWS_AS(esc_step(cfg, s, std::nan("")), model_error);
    CHECK_THROWS_AS(esc_step(cfg, s, INFINITY), model_error);
}

TEST_CASE("command stays bounded and switches respect the dwell on random costs") {
    const EscConfig cfg = configure_esc(120.0, 60.0, 30.0, 10.0, 90.0);
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> cost(20.0, 200.0);

    EscState s = make_initial_esc_state(cfg);
    double t = 0.0;
    double last_switch_t = -1.0;
    int prev_sign = s.relay_sign;
    for (int i = 0; i < 5000; ++i) {
        const EscStepResult r = esc_step(cfg, s, cost(rng));
        s = r.state;
        t += cfg.dt_s;
        REQUIRE(s.x_pct >= cfg.x_min_pct);
        REQUIRE(s.x_pct <= cfg.x_max_pct);
        REQUIRE((s.relay_sign == 1 || s.relay_sign == -1));
        REQUIRE(s.dwell_elapsed_s >= 0.0);
        if (s.relay_sign != prev_sign) {
            if (last_switch_t >= 0.0) {
                REQUIRE(t - last_switch_t >= cfg.dwell_limit_s);
            }
            last_switch_t = t;
            prev_sign = s.relay_sign;
        }
    }
}

namespace {

// Closed loop against a static map: the cost the controller sees is the map
// evaluated at its own previous command.
std::vector<double> run_static_map(const EscConfig& cfg, double x_star,
                                   double curvature, double scale, int steps) {
    EscState s = make_initial_esc_state(cfg);
    std::vector<double> xs;
    xs.reserve(steps);
    double x_applied = s.x_pct;
    for (int i = 0; i < steps; ++i) {
        const double j =
            scale * (curvature * (x_applied - x_star) * (x_applied - x_star) + 40.0);
        const EscStepResult r = esc_step(cfg, s, j);
        s = r.state;
        x_applied = r.x_command_pct;
        xs.push_back(x_applied);
    }
    return xs;
}

} // namespace

TEST_CASE("converges to the interior minimum of a static convex map") {
    const EscConfig cfg = configure_esc(183.0, 91.5, 60.0, 0.0, 100.0);
    const int steps = static_cast<int>(50.0 * cfg.dwell_limit_s / cfg.dt_s);
    const double amplitude_bound =
        1.5 * cfg.k_gain_pct * cfg.dwell_limit_s / cfg.dt_s;

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> star(20.0, 80.0);
    std::uniform_real_distribution<double> curv(0.02, 0.5);
    for (int trial = 0; trial < 8; ++trial) {
        const double x_star = star(rng);
        const auto xs = run_static_map(cfg, x_star, curv(rng), 1.0, steps);

        const auto tail = static_cast<std::size_t>(0.8 * xs.size());
        double mean = 0.0;
        for (std::size_t i = tail; i < xs.size(); ++i) mean += xs[i];
        mean /= static_cast<double>(xs.size() - tail);
        CHECK(std::abs(mean - x_star) < amplitude_bound);

        // Oscillation persistence: the relay keeps probing after convergence.
        double var = 0.0;
        for (std::size_t i = tail; i < xs.size(); ++i) {
            var += (xs[i] - mean) * (xs[i] - mean);
        }
        CHECK(std::sqrt(var / static_cast<double>(xs.size() - tail)) > 0.0);
    }
}

TEST_CASE("trajectory is invariant to positive cost scaling") {
    const EscConfig cfg = configure_esc(183.0, 91.5, 60.0, 0.0, 100.0);
    const int steps = 400;
    const auto base = run_static_map(cfg, 37.0, 0.08, 1.0, steps);
    for (double scale : {0.5, 2.0, 1000.0}) {
        const auto scaled = run_static_map(cfg, 37.0, 0.08, scale, steps);
        REQUIRE(scaled.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            REQUIRE(scaled[i] == base[i]);
        }
    }
}
