#include <doctest.h>

#include <cmath>
#include <random>

#include "hapdc/aero.hpp"

using namespace hapdc;

TEST_CASE("reynolds number") {
    HapPlatform p;
    CHECK(aero::reynolds(p, 0.0) == 0.0);
    CHECK(aero::reynolds(p, 20.0) == doctest::Approx(0.08891 * 20.0 * 34.0 / 1.422e-5).epsilon(1e-14));
    CHECK(aero::reynolds(p, 20.0) == doctest::Approx(4.2513e6).epsilon(1e-4));
}

TEST_CASE("envelope coefficient") {
    CHECK(aero::envelope_coeff(1.0, 1.0) == doctest::Approx(1.456).epsilon(1e-15));
    const double fr = 115.0 / 34.0;
    const double re = 4.2513e6;
    const double want = (0.172 * std::pow(fr, 1.0 / 3.0) + 0.252 / std::pow(fr, 1.2) + 1.032 / std::pow(fr, 2.7)) /
                        std::pow(re, 1.0 / 6.0);
    CHECK(aero::envelope_coeff(fr, re) == doctest::Approx(want).epsilon(1e-14));
    CHECK(aero::envelope_coeff(fr, 1e300) < 1e-40);
}

TEST_CASE("propulsion power") {
    HapPlatform p;
    CHECK(aero::propulsion_power(p, 0.0) == 0.0);
    CHECK(aero::propulsion_energy(p, 0.0, Window{}) == 0.0);
    const double p20 = aero::propulsion_power(p, 20.0);
    CHECK(p20 > 0.0);
    CHECK(aero::propulsion_power(p, 40.0) / p20 == doctest::Approx(std::pow(2.0, 17.0 / 6.0)).epsilon(1e-12));
    CHECK(aero::propulsion_energy(p, 20.0, Window{}) == doctest::Approx(p20 * 86400.0));
}

TEST_CASE("drag and reduced forms agree") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        HapPlatform p;
        p.air_density = 0.02 + 0.2 * u(rng);
        p.body_length = 50.0 + 150.0 * u(rng);
        p.body_diameter = 10.0 + 40.0 * u(rng);
        p.propeller_efficiency = 0.3 + 0.6 * u(rng);
        const double v = 0.5 + 40.0 * u(rng);
        const double a = aero::propulsion_power(p, v);
        const double b = aero::propulsion_power_reduced(p, v);
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(b));
    }
}
