#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "hapdc/channel.hpp"
#include "hapdc/config.hpp"
#include "hapdc/error.hpp"

using namespace hapdc;

namespace {

WorkloadSpec workload() { return parse_config("").workload; }

std::vector<double> grid(double stop, int n) {
    std::vector<double> v;
    for (int i = 0; i <= n; ++i) v.push_back(stop * i / n);
    return v;
}

}  // namespace

TEST_CASE("LoS matrix has unit-modulus entries") {
    const auto los = channel::los_matrix(16, 2, 31e9, 20e3);
    CHECK(los.rows() == 16);
    CHECK(los.cols() == 2);
    for (int i = 0; i < los.rows(); ++i) {
        for (int j = 0; j < los.cols(); ++j) CHECK(std::abs(los(i, j)) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("Rayleigh draws have the path-gain variance") {
    ChannelConfig cfg;
    cfg.rician_factor = 0.0;
    const auto link = channel::make_link(cfg);
    channel::ChannelSampler sampler(link, 99);
    const int draws = 100000;
    double power = 0.0;
    std::complex<double> mean = 0.0;
    for (int k = 0; k < draws; ++k) {
        const auto h = sampler.sample();
        power += std::norm(h(3, 1));
        mean += h(3, 1);
    }
    const double g = cfg.path_gain();
    CHECK(std::abs(power / draws / g - 1.0) < 0.02);
    CHECK(std::abs(mean / static_cast<double>(draws)) < 0.02 * std::sqrt(g));
}

TEST_CASE("large Rician factor approaches the LoS matrix") {
    ChannelConfig cfg;
    cfg.rician_factor = 1e12;
    const auto link = channel::make_link(cfg);
    const auto h = channel::sample_channel(link, 4);
    const channel::CMatrix want = std::sqrt(cfg.path_gain()) * link.los;
    CHECK((h - want).norm() <= 1e-5 * want.norm());
}

TEST_CASE("fixed seed repeats exactly") {
    const auto link = channel::make_link(ChannelConfig{});
    CHECK(channel::sample_channel(link, 17) == channel::sample_channel(link, 17));
    CHECK(channel::sample_channel(link, 17) != channel::sample_channel(link, 18));
    CHECK(channel::ergodic_rate(link, 512, 3) == channel::ergodic_rate(link, 512, 3));
}

TEST_CASE("rate forms") {
    ChannelConfig cfg;
    auto link = channel::make_link(cfg);
    const auto h = channel::sample_channel(link, 1);
    const double r = channel::rate(link, h);
    CHECK(r > 0.0);
    CHECK(channel::rate_det_form(link, h) == doctest::Approx(r).epsilon(1e-12));

    auto wide = link;
    wide.bandwidth_hz *= 2.0;
    CHECK(channel::rate(wide, h) == doctest::Approx(2.0 * r).epsilon(1e-15));

    auto silent = link;
    silent.input_covariance.setZero();
    CHECK(channel::rate(silent, h) == 0.0);

    cfg.precoding = Precoding::Mrt;
    const auto mrt = channel::make_link(cfg);
    REQUIRE(mrt.precoder);
    CHECK(mrt.precoder->squaredNorm() == doctest::Approx(cfg.tx_power));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto hm = channel::sample_channel(mrt, seed);
        const double a = channel::rate(mrt, hm);
        const double b = channel::rate_rank_one(mrt, hm);
        CHECK(std::abs(a - b) <= 1e-12 * b);
    }
    CHECK_THROWS(channel::rate_rank_one(link, h));
}

TEST_CASE("transmission energy") {
    const ModelConfig c = parse_config("");
    const auto budget = channel::make_link_budget(c.channel);
    CHECK(budget.ergodic_rate_bps > 0.0);
    std::vector<double> zeros(40, 0.0);
    CHECK(channel::transmission_energy(zeros, c.workload, budget, Window{}) == 0.0);

    const double full = budget.ergodic_rate_bps /
                        (c.workload.overhead_ratio * c.workload.task_length_instr * c.workload.bits_per_instruction);
    std::vector<double> one{full};
    CHECK(channel::duty_cycle(one, c.workload, budget.ergodic_rate_bps) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(channel::transmission_energy(one, c.workload, budget, Window{}) ==
          doctest::Approx(c.channel.tx_power * 86400.0).epsilon(1e-14));

    auto dead = budget;
    dead.ergodic_rate_bps = 0.0;
    CHECK_THROWS_AS(channel::transmission_energy(one, c.workload, dead, Window{}), LinkError);
}

TEST_CASE("spectral demand round trip") {
    const ModelConfig c = parse_config("");
    const double s = channel::spectral_demand(1234.0, c.workload, c.channel);
    CHECK(s == doctest::Approx(1234.0 * 1e6 * 4e-3 / 100e6));
    CHECK(channel::rate_for_demand(s, c.workload, c.channel) == doctest::Approx(1234.0));
}

TEST_CASE("outage bounds") {
    const ModelConfig c = parse_config("");
    const auto lambdas = grid(60000.0, 60);
    const auto curve = channel::outage_bounds(lambdas, c.channel, c.workload);
    CHECK(curve.ccdf_lower.front() == 1.0);
    CHECK(curve.ccdf_upper.front() == 1.0);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        CHECK(curve.ccdf_lower[i] <= curve.ccdf_upper[i] + 1e-15);
        CHECK(curve.drop_rate[i] == doctest::Approx(1.0 - curve.ccdf_lower[i]).epsilon(1e-15));
        if (i > 0) {
            CHECK(curve.ccdf_lower[i] <= curve.ccdf_lower[i - 1] + 1e-15);
            CHECK(curve.ccdf_upper[i] <= curve.ccdf_upper[i - 1] + 1e-15);
        }
    }
    const std::vector<double> huge{1e9};
    const auto tail = channel::outage_bounds(huge, c.channel, c.workload);
    CHECK(tail.ccdf_lower[0] < 1e-12);
    CHECK(tail.ccdf_upper[0] < 1e-12);
}

TEST_CASE("drop probability and drop-free rate") {
    const ModelConfig c = parse_config("");
    const double star = channel::drop_free_rate(c.channel, c.workload);
    CHECK(star > 0.0);
    CHECK(channel::drop_probability(star, c.channel, c.workload) <= 1e-12);
    CHECK(channel::drop_probability(1.5 * star, c.channel, c.workload) > 1e-12);
    auto large = c.workload;
    large.task_length_instr = WorkloadSpec::kLargeTaskLength;
    CHECK(channel::drop_free_rate(c.channel, large) < star);
}

TEST_CASE("empirical CCDF") {
    ChannelConfig cfg;
    cfg.rician_factor = 5.0;
    const WorkloadSpec w = workload();
    const auto lambdas = grid(60000.0, 30);
    const auto a = channel::empirical_ccdf(lambdas, cfg, w, 10000, 1);
    const auto b = channel::empirical_ccdf(lambdas, cfg, w, 10000, 2);
    CHECK(a.ccdf_empirical.front() == 1.0);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        CHECK(a.ccdf_empirical[i] >= a.ccdf_lower[i] - 3.0 * a.empirical_se[i]);
        CHECK(a.ccdf_empirical[i] <= a.ccdf_upper[i] + 3.0 * a.empirical_se[i]);
        const double se = std::hypot(a.empirical_se[i], b.empirical_se[i]);
        CHECK(std::abs(a.ccdf_empirical[i] - b.ccdf_empirical[i]) <= 6.0 * se);
    }
    const auto again = channel::empirical_ccdf(lambdas, cfg, w, 10000, 1);
    CHECK(again.ccdf_empirical == a.ccdf_empirical);
}

TEST_CASE("derived seeds differ per index") {
    CHECK(channel::derive_seed(1, 0) != channel::derive_seed(1, 1));
    CHECK(channel::derive_seed(1, 0) != channel::derive_seed(2, 0));
    CHECK(channel::derive_seed(5, 3) == channel::derive_seed(5, 3));
}
