#pragma once

// Solar geometry and harvested power of a HAP at (latitude, day).
// Latitudes are degrees at the API boundary and radians internally.
// Days may be fractional.

#include "hapdc/config.hpp"

namespace hapdc::solar {

inline constexpr double kObliquity = 0.4093;         // rad
inline constexpr double kSolarConstant = 1366.1;     // W/m^2

struct SolarGeometry {
    double mean_anomaly = 0.0;      // rad
    double azimuthal_angle = 0.0;   // rad
    double declination = 0.0;       // rad
    double day_fraction = 0.0;      // daylight share of the day
    double sun_max_altitude = 0.0;  // rad
    double max_radiation = 0.0;     // W/m^2
};

double mean_anomaly(double day);
double azimuthal_angle(double day);
double declination(double day);

/// Throws PolarError when the arccos argument leaves [-1, 1].
double day_fraction(double latitude_deg, double day);

double max_radiation(double latitude_deg, double day);
double sun_max_altitude(double latitude_deg, double day);

/// Daily mean extra-terrestrial irradiance. Throws PolarError.
double irradiance(double latitude_deg, double day);

SolarGeometry geometry(double latitude_deg, double day);

/// eta_pv * A_pv * G(l, d).
double harvested_power(const HapPlatform& platform, double latitude_deg, double day);
double harvested_energy(const HapPlatform& platform, double latitude_deg, double day, const Window& window);

/// harvested_power / harvest_hours_divisor; the power budget of the flying condition.
double mean_harvested_power(const HapPlatform& platform, double latitude_deg, double day);

}  // namespace hapdc::solar
