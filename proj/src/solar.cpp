#include "hapdc/solar.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hapdc/error.hpp"

namespace hapdc::solar {

namespace {

constexpr double kPi = std::numbers::pi;

double to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace

double mean_anomaly(double day) { return -0.041 + 0.017202 * day; }

double azimuthal_angle(double day) {
    const double m = mean_anomaly(day);
    return -1.3411 + m + 0.0334 * std::sin(m) + 0.0003 * std::sin(2.0 * m);
}

double declination(double day) { return kObliquity * std::sin(2.0 * kPi * (day - 79.75) / 365.0); }

double day_fraction(double latitude_deg, double day) {
    const double se = std::sin(kObliquity);
    const double sp = std::sin(azimuthal_angle(day));
    const double arg = std::tan(to_rad(latitude_deg)) * se * sp / std::sqrt(1.0 - se * se * sp * sp);
    if (!(arg >= -1.0 && arg <= 1.0)) {
        throw PolarError("polar day/night at latitude " + std::to_string(latitude_deg) + " deg, day " +
                         std::to_string(day));
    }
    return 1.0 - std::acos(arg) / kPi;
}

double max_radiation(double latitude_deg, double day) {
    // Eccentricity correction: the 360 d / 365 argument is in degrees.
    return kSolarConstant * (1.0 + 0.033 * std::cos(2.0 * kPi * day / 365.0)) *
           std::cos(to_rad(latitude_deg) - declination(day));
}

double sun_max_altitude(double latitude_deg, double day) {
    return kPi / 2.0 + to_rad(latitude_deg) - declination(day);
}

double irradiance(double latitude_deg, double day) {
    const double tau = day_fraction(latitude_deg, day);
    const double xi = sun_max_altitude(latitude_deg, day);
    return tau * max_radiation(latitude_deg, day) * (1.0 - std::cos(xi)) / xi;
}

SolarGeometry geometry(double latitude_deg, double day) {
    SolarGeometry g;
    g.mean_anomaly = mean_anomaly(day);
    g.azimuthal_angle = azimuthal_angle(day);
    g.declination = declination(day);
    g.day_fraction = day_fraction(latitude_deg, day);
    g.sun_max_altitude = sun_max_altitude(latitude_deg, day);
    g.max_radiation = max_radiation(latitude_deg, day);
    return g;
}

double harvested_power(const HapPlatform& platform, double latitude_deg, double day) {
    return platform.pv_efficiency * platform.pv_area * irradiance(latitude_deg, day);
}

double harvested_energy(const HapPlatform& platform, double latitude_deg, double day, const Window& window) {
    return harvested_power(platform, latitude_deg, day) * window.length();
}

double mean_harvested_power(const HapPlatform& platform, double latitude_deg, double day) {
    return harvested_power(platform, latitude_deg, day) / platform.harvest_hours_divisor;
}

}  // namespace hapdc::solar
