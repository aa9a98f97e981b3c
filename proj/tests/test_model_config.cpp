#include <doctest.h>

#include <string>

#include "hapdc/config.hpp"
#include "hapdc/error.hpp"

using namespace hapdc;

TEST_CASE("max_hap_servers") {
    HapPlatform p;
    ServerSpec s;
    CHECK(max_hap_servers(p, s) == 9);
    p.payload_capacity = p.rack_mass;
    CHECK(max_hap_servers(p, s) == 0);
    p.payload_capacity = 813.0;
    CHECK(max_hap_servers(p, s) == 50);
    p.payload_capacity = 100.0;
    CHECK(max_hap_servers(p, s) == 0);
}

TEST_CASE("uniform_split") {
    CHECK(uniform_split(100.0, 4) == std::vector<double>(4, 25.0));
    CHECK(uniform_split(0.0, 7) == std::vector<double>(7, 0.0));
    const auto ten = uniform_split(2600.0, 10);
    REQUIRE(ten.size() == 10);
    for (double r : ten) CHECK(r == doctest::Approx(260.0).epsilon(1e-15));
    CHECK_THROWS_AS(uniform_split(10.0, 0), ValidationError);
}

TEST_CASE("empty text gives the defaults") {
    const ModelConfig c = parse_config("");
    ModelConfig d;
    complete_rates(d);
    CHECK(c == d);
    CHECK(parse_config("  \n ") == d);
    CHECK(c.platform.pv_area == 8000.0);
    CHECK(c.platform.pv_efficiency == 0.4);
    CHECK(c.platform.air_density == 0.08891);
    CHECK(c.scenario.hap_rates.size() == 40);
    CHECK(c.scenario.ground_rates.size() == 50);
}

TEST_CASE("shipped config equals the built-in defaults") {
    const ModelConfig shipped = load_config(std::string(HAPDC_SOURCE_DIR) + "/config/default.json");
    CHECK(shipped == parse_config(""));
    CHECK(config_hash(shipped) == config_hash(parse_config("")));
}

TEST_CASE("inverted server power bound names ServerSpec") {
    try {
        parse_config(R"({"server": {"p_idle": 400, "p_peak": 300}})");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("ServerSpec") != std::string::npos);
    }
}

TEST_CASE("malformed and unknown keys are config errors") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"server": {"p_idel": 1}})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("serialize round trip") {
    ModelConfig c = parse_config(R"({"scenario": {"latitude_deg": -12.5, "hap_servers": 3,
                                     "hap_rates": [1, 2.5, 3]}, "channel": {"precoding": "mrt"}})");
    CHECK(c.scenario.hap_rates == std::vector<double>{1.0, 2.5, 3.0});
    const ModelConfig back = parse_config(serialize_config(c));
    CHECK(back == c);
    CHECK(config_hash(back) == config_hash(c));
    c.scenario.latitude_deg = -12.0;
    CHECK(config_hash(back) != config_hash(c));
}

TEST_CASE("rate vectors must match server counts") {
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"hap_servers": 2, "hap_rates": [1, 2, 3]}})"), ValidationError);
}

TEST_CASE("workload total is split evenly") {
    const ModelConfig c = parse_config(R"({"workload": {"arrival_rate_total": 900},
                                           "scenario": {"ground_servers": 5, "hap_servers": 4}})");
    for (double r : c.scenario.ground_rates) CHECK(r == doctest::Approx(100.0));
    for (double r : c.scenario.hap_rates) CHECK(r == doctest::Approx(100.0));
}

TEST_CASE("utilization and high-load threshold") {
    ServerSpec s;
    CHECK(utilization(s, 0.0, 1e6) == 0.0);
    CHECK(utilization(s, 290.0, 1e6) == doctest::Approx(0.5));
    CHECK(high_load_threshold(s, 1e6) == doctest::Approx(580.0));
    s.desired_utilization = 0.5;
    CHECK(high_load_threshold(s, 1e8) == doctest::Approx(2.9));
}

TEST_CASE("task length presets") {
    CHECK(parse_config(R"({"workload": {"task_length_instr": "large"}})").workload.task_length_instr == 1e8);
    CHECK(parse_config(R"({"workload": {"task_length_instr": 5e6}})").workload.task_length_instr == 5e6);
}

TEST_CASE("wind table interpolation") {
    const ModelConfig c = load_config(std::string(HAPDC_SOURCE_DIR) + "/config/wind_table.json");
    REQUIRE(c.wind.table_path);
    const double v = c.wind.speed(15.0, 100.0);
    CHECK(v > 0.0);
    CHECK(c.wind.speed(-90.0, 1.0) == doctest::Approx(c.wind.table_speeds.front()));
    WindModel constant;
    CHECK(constant.speed(12.0, 40.0) == 20.0);
}
