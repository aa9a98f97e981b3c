#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <variant>

#include "hapdc/error.hpp"
#include "hapdc/sweep.hpp"

using namespace hapdc;

namespace {

double num(const Cell& c) { return std::get<double>(c); }
const std::string& text(const Cell& c) { return std::get<std::string>(c); }

std::size_t column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
}

SweepSpec spec(Axis axis, double start, double stop, double step) {
    SweepSpec s;
    s.axis = axis;
    s.start = start;
    s.stop = stop;
    s.step = step;
    return s;
}

std::string csv(const SweepResult& r) {
    std::ostringstream out;
    write_csv(out, r.table, Manifest{"t", 1, 1, {}});
    return out.str();
}

}  // namespace

TEST_CASE("axis names") {
    CHECK(parse_axis("latitude") == Axis::Latitude);
    CHECK(parse_axis("lat") == Axis::Latitude);
    CHECK(parse_axis("servers") == Axis::HapServers);
    CHECK(parse_axis("lambda") == Axis::ArrivalRate);
    CHECK(to_string(Axis::HapServers) == "hap_servers");
    CHECK_THROWS_AS(parse_axis("altitude"), UsageError);
}

TEST_CASE("range parsing") {
    SweepSpec s;
    parse_range("-60:60:10", s);
    CHECK(axis_values(s).size() == 13);
    parse_range("0:1:0.1", s);
    CHECK(axis_values(s).size() == 11);
    CHECK(axis_values(s).back() == doctest::Approx(1.0));
    CHECK_THROWS_AS(parse_range("1:2", s), UsageError);
    CHECK_THROWS_AS(parse_range("a:2:1", s), UsageError);
    CHECK_THROWS_AS(parse_range("1:2:3:4", s), UsageError);
    parse_range("5:1:1", s);
    CHECK_THROWS_AS(axis_values(s), UsageError);
    parse_range("1:5:0", s);
    CHECK_THROWS_AS(axis_values(s), UsageError);
    parse_range("0:1e9:1", s);
    CHECK_THROWS_AS(axis_values(s), UsageError);
}

TEST_CASE("flying sweep over servers decreases") {
    ModelConfig c = parse_config("");
    c.scenario.latitude_deg = 40.0;
    c.scenario.day_of_year = 355.0;
    const auto r = run_flying_sweep(c, spec(Axis::HapServers, 1, 50, 1));
    REQUIRE(r.table.rows.size() == 50);
    const auto cf = column(r.table, "closed_form");
    for (std::size_t i = 1; i < r.table.rows.size(); ++i) {
        CHECK(num(r.table.rows[i][cf]) < num(r.table.rows[i - 1][cf]));
    }
    CHECK(text(r.table.rows[0][column(r.table, "binding")]) != "payload");
    CHECK(text(r.table.rows[49][column(r.table, "binding")]) == "payload");
}

TEST_CASE("flying sweep records polar points") {
    ModelConfig c = parse_config("");
    c.scenario.latitude_deg = 80.0;
    const auto r = run_flying_sweep(c, spec(Axis::Day, 1, 366, 5));
    const auto st = column(r.table, "status");
    bool polar = false;
    bool ok = false;
    for (const auto& row : r.table.rows) {
        polar = polar || text(row[st]) == "polar";
        ok = ok || text(row[st]) == "ok";
    }
    CHECK(polar);
    CHECK(ok);
    CHECK(r.feasible_points > 0);
}

TEST_CASE("equator has the flattest annual curve") {
    const ModelConfig c = parse_config("");
    auto spread = [&](double lat) {
        ModelConfig k = c;
        k.scenario.latitude_deg = lat;
        k.scenario.hap_servers = 5;
        k.scenario.hap_rates.assign(5, 0.0);
        const auto r = run_flying_sweep(k, spec(Axis::Day, 1, 361, 10));
        const auto cf = column(r.table, "closed_form");
        double lo = INFINITY;
        double hi = -INFINITY;
        for (const auto& row : r.table.rows) {
            lo = std::min(lo, num(row[cf]));
            hi = std::max(hi, num(row[cf]));
        }
        return hi - lo;
    };
    const double equator = spread(0.0);
    for (double lat : {-50.0, -30.0, 30.0, 50.0}) CHECK(equator < spread(lat));
}

TEST_CASE("energy sweep over latitude") {
    const ModelConfig c = parse_config("");
    const auto r = run_energy_sweep(c, spec(Axis::Latitude, -60, 60, 20));
    const auto sr = column(r.table, "saved_rate");
    const auto retx = column(r.table, "saved_rate_retx");
    for (const auto& row : r.table.rows) {
        CHECK(num(row[sr]) > 0.0);
        CHECK(num(row[retx]) >= num(row[sr]));
    }
}

TEST_CASE("energy sweep with two HAPs") {
    ModelConfig one = parse_config("");
    ModelConfig two = one;
    two.scenario.hap_count = 2;
    const auto s = spec(Axis::Latitude, -40, 40, 40);
    const auto a = run_energy_sweep(one, s);
    const auto b = run_energy_sweep(two, s);
    const auto sr = column(a.table, "saved_rate");
    for (std::size_t i = 0; i < a.table.rows.size(); ++i) {
        CHECK(num(b.table.rows[i][sr]) > num(a.table.rows[i][sr]));
    }
}

TEST_CASE("outage sweep") {
    const ModelConfig c = parse_config("");
    auto s = spec(Axis::ArrivalRate, 0, 40000, 2000);
    s.samples = 4000;
    const auto r = run_outage_sweep(c, s);
    const auto lb = column(r.table, "ccdf_lb");
    const auto ub = column(r.table, "ccdf_ub");
    const auto mc = column(r.table, "ccdf_mc");
    const auto se = column(r.table, "ccdf_mc_se");
    const auto with = column(r.table, "saved_rate_retx");
    const auto without = column(r.table, "saved_rate");
    for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
        const auto& row = r.table.rows[i];
        CHECK(num(row[mc]) >= num(row[lb]) - 3.0 * num(row[se]));
        CHECK(num(row[mc]) <= num(row[ub]) + 3.0 * num(row[se]));
        if (i > 0) CHECK(num(row[lb]) <= num(r.table.rows[i - 1][lb]));
        if (std::isfinite(num(row[with]))) CHECK(num(row[with]) >= num(row[without]));
    }
    CHECK_THROWS_AS(run_outage_sweep(c, spec(Axis::Day, 1, 2, 1)), UsageError);
}

TEST_CASE("delay sweep") {
    const ModelConfig c = parse_config("");
    auto s = spec(Axis::ArrivalRate, 400, 3600, 800);
    s.samples = 1000000;
    const auto r = run_delay_sweep(c, s);
    const auto a = column(r.table, "analytic_wait");
    const auto d = column(r.table, "des_wait");
    const auto e = column(r.table, "des_se");
    for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
        const auto& row = r.table.rows[i];
        CHECK(std::abs(num(row[d]) - num(row[a])) <= 3.0 * num(row[e]));
        if (i > 0) CHECK(num(row[a]) > num(r.table.rows[i - 1][a]));
    }
    const auto unstable = run_delay_sweep(c, spec(Axis::ArrivalRate, 4000, 4000, 1));
    CHECK(text(unstable.table.rows[0][column(unstable.table, "status")]) == "unstable");
    CHECK(unstable.feasible_points == 0);
}

TEST_CASE("results do not depend on the worker count") {
    const ModelConfig c = parse_config("");
    auto s = spec(Axis::ArrivalRate, 0, 20000, 5000);
    s.samples = 2000;
    s.seed = 77;
    s.workers = 1;
    const std::string serial = csv(run_outage_sweep(c, s));
    s.workers = 4;
    CHECK(csv(run_outage_sweep(c, s)) == serial);

    auto d = spec(Axis::ArrivalRate, 1000, 3000, 1000);
    d.samples = 10000;
    d.workers = 1;
    const std::string one = csv(run_delay_sweep(c, d));
    d.workers = 3;
    CHECK(csv(run_delay_sweep(c, d)) == one);
}
