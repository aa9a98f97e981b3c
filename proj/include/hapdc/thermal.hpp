#pragma once

// Terrestrial data-center energy: server compute power, CRAC cooling with the
// transient inlet/CPU temperature model, and the all-ground total.

#include <span>
#include <vector>

#include "hapdc/config.hpp"

namespace hapdc {

/// Per-subsystem energy of one scenario evaluation, in joules.
struct EnergyBreakdown {
    double compute_j = 0.0;
    double cooling_j = 0.0;
    double payload_j = 0.0;
    double propulsion_j = 0.0;
    double transmission_j = 0.0;

    double total_j() const { return compute_j + cooling_j + payload_j + propulsion_j + transmission_j; }
};

}  // namespace hapdc

namespace hapdc::thermal {

/// One server as seen by its CRAC: thermal constants plus its constant compute power.
struct ServerLoad {
    double compute_power = 0.0;       // W
    double heat_capacity = 0.0;       // J/K
    double thermal_resistance = 0.0;  // K/W
};

/// P_idle + (P_peak - P_idle) u. Throws OverloadError when u exceeds u-bar.
double compute_power(const ServerSpec& server, double rate, double task_length_instr);

/// Linear model without the high-load check, for load that is absorbed regardless.
double compute_power_unchecked(const ServerSpec& server, double rate, double task_length_instr);

double compute_energy(const ServerSpec& server, double rate, double task_length_instr, const Window& window);

/// CRAC coefficient of performance at outlet temperature `t_out_kelvin`.
/// The quadratic is evaluated in Celsius unless `celsius` is false.
double cop(double t_out_kelvin, bool celsius = true);

/// Temperatures of one server under one CRAC, evaluated component by component.
class ThermalTrace {
public:
    ThermalTrace(const ServerLoad& load, const CoolingSpec& cooling);

    double t_in(double t) const;
    double t_cpu(double t) const;
    double t_out(double t) const;
    /// C_air f_air (T_out - T_in).
    double heat_removed(double t) const;

private:
    ServerLoad load_;
    CoolingSpec cooling_;
};

/// Closed-form heat removed from `servers` at time t >= 0 (W).
double heat_removed(std::span<const ServerLoad> servers, const CoolingSpec& cooling, double t);

/// Closed-form CRAC energy over the window: fan energy plus the integral of Q_j / COP.
double cooling_energy(std::span<const ServerLoad> servers, const CoolingSpec& cooling, const Window& window);

/// Server count of each of `crac_count` CRAC units under an even partition;
/// the first (servers % crac_count) units take one extra server.
std::vector<int> crac_partition(int servers, int crac_count);

/// Builds loads for a homogeneous server fleet. Throws OverloadError.
std::vector<ServerLoad> make_loads(const ServerSpec& server, std::span<const double> rates, double task_length_instr,
                                   bool check_overload = true);

/// Compute + cooling of a terrestrial site running `rates` (one entry per server).
EnergyBreakdown site_energy(const ServerSpec& server, const CoolingSpec& cooling, std::span<const double> rates,
                            double task_length_instr, const Window& window, bool check_overload = true);

/// All-ground baseline: every server of the scenario (I + hap_count * I') on the ground.
EnergyBreakdown tdc_total_energy(const ModelConfig& config);

}  // namespace hapdc::thermal
