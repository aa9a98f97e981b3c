#include <doctest.h>

#include <cmath>
#include <vector>

#include "hapdc/aero.hpp"
#include "hapdc/error.hpp"
#include "hapdc/offload.hpp"
#include "hapdc/solar.hpp"

using namespace hapdc;

namespace {

ModelConfig loaded(double per_server, int hap_servers = 40) {
    ModelConfig c = parse_config("");
    c.scenario.hap_servers = hap_servers;
    c.scenario.hap_rates.assign(static_cast<std::size_t>(hap_servers), per_server);
    c.scenario.ground_rates.assign(static_cast<std::size_t>(c.scenario.ground_servers), per_server);
    return c;
}

}  // namespace

TEST_CASE("payload energy") {
    ServerSpec s;
    std::vector<double> zeros(40, 0.0);
    CHECK(offload::payload_energy(zeros, s, 1e6, Window{}) == doctest::Approx(40.0 * 150.0 * 86400.0));
    std::vector<double> full{580.0};
    CHECK(offload::payload_energy(full, s, 1e6, Window{}) == doctest::Approx(300.0 * 86400.0));
    std::vector<double> over{600.0};
    CHECK_THROWS_AS(offload::payload_energy(over, s, 1e6, Window{}), OverloadError);
}

TEST_CASE("flying condition") {
    ModelConfig c = loaded(0.0);
    c.platform.pv_area = 1e7;
    const auto f = offload::flying_condition(c);
    CHECK(f.feasible);
    const double harvest = solar::mean_harvested_power(c.platform, 60.0, 150.0) * 86400.0;
    const double prop = aero::propulsion_energy(c.platform, 20.0, Window{});
    CHECK(f.slack_j == doctest::Approx(harvest - prop - 40.0 * 150.0 * 86400.0).epsilon(1e-14));

    c.platform.pv_efficiency = 0.0;
    for (int n : {1, 5, 40}) {
        ModelConfig k = loaded(0.0, n);
        k.platform.pv_efficiency = 0.0;
        CHECK_FALSE(offload::flying_condition(k).feasible);
    }
    ModelConfig polar = loaded(0.0);
    polar.scenario.latitude_deg = 85.0;
    polar.scenario.day_of_year = 172.0;
    CHECK_THROWS_AS(offload::flying_condition(polar), PolarError);
}

TEST_CASE("lambda max is zero when harvest only covers idle and propulsion") {
    ModelConfig c = loaded(0.0, 5);
    const double need = aero::propulsion_power(c.platform, 20.0) + 5.0 * c.server.p_idle;
    c.platform.pv_area *= need / solar::mean_harvested_power(c.platform, 30.0, 100.0);
    const auto m = offload::lambda_max(30.0, 100.0, 5, c);
    CHECK(std::abs(m.closed_form) < 1e-9 * m.threshold);
    CHECK(m.rate == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(m.binding == offload::Binding::Harvest);
}

TEST_CASE("lambda max closes the energy balance when harvest binds") {
    for (double lat : {-50.0, -30.0, 0.0, 30.0, 50.0}) {
        for (double day : {20.0, 172.0, 300.0}) {
            // Size the PV array so the harvest root sits at half the high-load threshold.
            const int n = 9;
            ModelConfig base = parse_config("");
            const auto& s = base.server;
            const double target = 0.5 * high_load_threshold(s, 1e6);
            const double need = aero::propulsion_power(base.platform, 20.0) + n * s.p_idle +
                                target * n * 1e6 * (s.p_peak - s.p_idle) / s.service_rate_ips();
            base.platform.pv_area *= need / solar::mean_harvested_power(base.platform, lat, day);
            const auto m = offload::lambda_max(lat, day, n, base);
            CHECK(m.binding == offload::Binding::Harvest);
            CHECK(m.rate == doctest::Approx(target).epsilon(1e-10));
            ModelConfig c = base;
            c.scenario.hap_servers = n;
            c.scenario.hap_rates.assign(n, m.rate);
            c.scenario.latitude_deg = lat;
            c.scenario.day_of_year = day;
            const auto f = offload::flying_condition(c);
            CHECK(std::abs(f.slack_j) <= 1e-9 * f.harvested_j);
        }
    }
}

TEST_CASE("binding constraint labels") {
    const ModelConfig c = parse_config("");
    CHECK(offload::lambda_max(0.0, 172.0, 40, c).binding == offload::Binding::Payload);
    CHECK(offload::to_string(offload::Binding::HighLoad) == "high-load");
    CHECK(offload::to_string(offload::Binding::Harvest) == "harvest");
    CHECK(offload::to_string(offload::Binding::Payload) == "payload");
    CHECK_THROWS_AS(offload::lambda_max(0.0, 172.0, 0, c), ValidationError);
}

TEST_CASE("lambda max decreases with the server count") {
    const ModelConfig c = parse_config("");
    double prev = INFINITY;
    for (int n = 1; n <= 50; ++n) {
        const double cf = offload::lambda_max(40.0, 355.0, n, c).closed_form;
        CHECK(cf < prev);
        prev = cf;
    }
}

TEST_CASE("no HAP servers means no saving") {
    ModelConfig c = loaded(100.0, 0);
    const auto r = offload::saving(c, false);
    CHECK(r.saved_j == 0.0);
    CHECK(r.saved_rate == 0.0);
    CHECK(offload::hybrid_total_energy(c).total_j() == thermal::tdc_total_energy(c).total_j());
}

TEST_CASE("hybrid breakdown") {
    const ModelConfig c = loaded(200.0);
    const auto budget = channel::make_link_budget(c.channel);
    const auto e = offload::hybrid_total_energy(c, budget);
    CHECK(e.payload_j == doctest::Approx(offload::payload_energy(c.scenario.hap_rates, c.server, 1e6, Window{})));
    CHECK(e.propulsion_j == doctest::Approx(aero::propulsion_energy(c.platform, 20.0, Window{})));
    CHECK(e.transmission_j ==
          doctest::Approx(channel::transmission_energy(c.scenario.hap_rates, c.workload, budget, Window{})));
    const auto ground = thermal::site_energy(c.server, c.cooling, c.scenario.ground_rates, 1e6, Window{});
    CHECK(e.compute_j == doctest::Approx(ground.compute_j));
    CHECK(e.cooling_j == doctest::Approx(ground.cooling_j));
}

TEST_CASE("retransmission never lowers the saving") {
    const auto budget = channel::make_link_budget(parse_config("").channel);
    for (double per_server : {0.0, 100.0, 300.0, 397.0, 450.0, 580.0}) {
        const ModelConfig c = loaded(per_server);
        const auto without = offload::saving(c, budget, false);
        const auto with = offload::saving(c, budget, true);
        CHECK(with.saved_rate >= without.saved_rate - 1e-15);
        CHECK(with.e_tdc_j == without.e_tdc_j);
    }
    const ModelConfig high = loaded(580.0);
    const auto w = offload::saving(high, budget, true);
    CHECK(w.drop_probability > 0.0);
    CHECK(w.retransmissions >= 1);
    CHECK(w.saved_rate > offload::saving(high, budget, false).saved_rate);
}

TEST_CASE("saving falls as the wind rises") {
    double prev = INFINITY;
    for (double v : {0.0, 5.0, 10.0, 20.0, 30.0}) {
        ModelConfig c = loaded(100.0);
        c.wind.constant_speed = v;
        const double s = offload::saving(c, false).saved_rate;
        CHECK(s <= prev);
        prev = s;
    }
}

TEST_CASE("two HAPs save more than one") {
    ModelConfig one = loaded(300.0);
    ModelConfig two = one;
    two.scenario.hap_count = 2;
    const auto budget = channel::make_link_budget(one.channel);
    const auto r1 = offload::saving(one, budget, false);
    const auto r2 = offload::saving(two, budget, false);
    CHECK(r1.saved_rate > 0.0);
    CHECK(r2.saved_rate > r1.saved_rate);
    CHECK(r2.saved_j == doctest::Approx(2.0 * r1.saved_j).epsilon(1e-12));
}
