#pragma once

// Airship drag and propulsion power.

#include "hapdc/config.hpp"

namespace hapdc::aero {

struct DragState {
    double reynolds = 0.0;
    double envelope_coeff = 0.0;
    double drag_coeff = 0.0;      // N_C * C_envelope
    double reduced_drag = 0.0;    // C'_D, so that P = v_wind^(17/6) * C'_D
    double fitness_ratio = 0.0;
};

double reynolds(const HapPlatform& platform, double v_wind);

/// Shape polynomial over Re^(1/6). Throws NumericalError for reynolds <= 0.
double envelope_coeff(double fitness_ratio, double reynolds);

/// C'_D; independent of wind speed.
double reduced_drag(const HapPlatform& platform);

/// Drag quantities at a strictly positive wind speed.
DragState drag_state(const HapPlatform& platform, double v_wind);

/// Propeller power, evaluated from the drag-coefficient form. Zero wind gives exactly 0.
double propulsion_power(const HapPlatform& platform, double v_wind);

/// The same power from the reduced form v_wind^(17/6) * C'_D.
double propulsion_power_reduced(const HapPlatform& platform, double v_wind);

double propulsion_energy(const HapPlatform& platform, double v_wind, const Window& window);

}  // namespace hapdc::aero
