#pragma once

// HAP flying condition, maximum admissible workload, and the energy saved by
// moving I' servers from the terrestrial site to the airship.

#include <span>
#include <string>

#include "hapdc/channel.hpp"
#include "hapdc/config.hpp"
#include "hapdc/thermal.hpp"

namespace hapdc::offload {

struct FlyingAssessment {
    double harvested_j = 0.0;
    double payload_j = 0.0;
    double propulsion_j = 0.0;
    double slack_j = 0.0;   // harvested - payload - propulsion
    bool feasible = false;  // slack_j >= 0
};

enum class Binding { Harvest, HighLoad, Payload };

std::string to_string(Binding b);

struct LambdaMax {
    double rate = 0.0;         // tasks/s per HAP server
    double closed_form = 0.0;  // unclamped harvest root
    double threshold = 0.0;    // u-bar mu / theta*
    Binding binding = Binding::Harvest;
};

struct SavingReport {
    double e_tdc_j = 0.0;
    double e_hybrid_j = 0.0;
    double saved_j = 0.0;           // net of retransmission spend
    double saved_rate = 0.0;        // saved_j / e_tdc_j
    double gross_saved_j = 0.0;     // before retransmission spend
    double retransmission_j = 0.0;
    long long retransmissions = 0;  // N_r
    double drop_probability = 0.0;
    double dropped_rate = 0.0;      // tasks/s per HAP link
    bool ground_overloaded = false; // dropped share pushed a ground server past u-bar
    EnergyBreakdown tdc;
    EnergyBreakdown hybrid;
};

/// Compute energy of the HAP servers over the window. Throws OverloadError.
double payload_energy(std::span<const double> hap_rates, const ServerSpec& server, double task_length_instr,
                      const Window& window);

/// Energy balance of one HAP at the scenario's latitude, day and HAP rates. Throws PolarError.
FlyingAssessment flying_condition(const ModelConfig& config);

/// Largest per-server rate with I' equally loaded HAP servers. Throws PolarError.
LambdaMax lambda_max(double latitude_deg, double day, int hap_servers, const ModelConfig& config);

/// Ground compute and cooling for the I ground servers plus, per HAP, payload,
/// propulsion and transmission energy.
EnergyBreakdown hybrid_total_energy(const ModelConfig& config, const channel::LinkBudget& budget);
EnergyBreakdown hybrid_total_energy(const ModelConfig& config);

SavingReport saving(const ModelConfig& config, const channel::LinkBudget& budget, bool with_retransmission);
SavingReport saving(const ModelConfig& config, bool with_retransmission);

}  // namespace hapdc::offload
