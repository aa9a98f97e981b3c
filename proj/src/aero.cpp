#include "hapdc/aero.hpp"

#include <cmath>

#include "hapdc/error.hpp"

namespace hapdc::aero {

namespace {

double shape_polynomial(double fr) {
    return 0.172 * std::cbrt(fr) + 0.252 * std::pow(fr, -1.2) + 1.032 * std::pow(fr, -2.7);
}

}  // namespace

double reynolds(const HapPlatform& p, double v_wind) { return p.air_density * v_wind * p.body_diameter / p.air_viscosity; }

double envelope_coeff(double fitness_ratio, double reynolds) {
    if (!(reynolds > 0.0)) throw NumericalError("envelope_coeff: Reynolds number must be positive");
    return shape_polynomial(fitness_ratio) / std::pow(reynolds, 1.0 / 6.0);
}

double reduced_drag(const HapPlatform& p) {
    return std::pow(p.air_density, 5.0 / 6.0) * std::pow(p.hap_velocity, 2.0 / 3.0) / (2.0 * p.propeller_efficiency) *
           std::pow(p.air_viscosity, 1.0 / 6.0) * p.drag_constant * shape_polynomial(p.fitness_ratio()) /
           std::pow(p.body_diameter, 1.0 / 6.0);
}

DragState drag_state(const HapPlatform& p, double v_wind) {
    DragState s;
    s.fitness_ratio = p.fitness_ratio();
    s.reynolds = reynolds(p, v_wind);
    s.envelope_coeff = envelope_coeff(s.fitness_ratio, s.reynolds);
    s.drag_coeff = p.drag_constant * s.envelope_coeff;
    s.reduced_drag = reduced_drag(p);
    return s;
}

double propulsion_power(const HapPlatform& p, double v_wind) {
    if (v_wind < 0.0) throw ValidationError("propulsion_power: wind speed must be non-negative");
    if (v_wind == 0.0) return 0.0;
    const DragState s = drag_state(p, v_wind);
    return p.air_density / (2.0 * p.propeller_efficiency) * v_wind * v_wind * v_wind *
           std::pow(p.hap_velocity, 2.0 / 3.0) * s.drag_coeff;
}

double propulsion_power_reduced(const HapPlatform& p, double v_wind) {
    if (v_wind < 0.0) throw ValidationError("propulsion_power: wind speed must be non-negative");
    if (v_wind == 0.0) return 0.0;
    return std::pow(v_wind, 17.0 / 6.0) * reduced_drag(p);
}

double propulsion_energy(const HapPlatform& p, double v_wind, const Window& window) {
    return propulsion_power_reduced(p, v_wind) * window.length();
}

}  // namespace hapdc::aero
