#include "hapdc/offload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hapdc/aero.hpp"
#include "hapdc/error.hpp"
#include "hapdc/solar.hpp"

namespace hapdc::offload {

namespace {

double wind_speed(const ModelConfig& c) { return c.wind.speed(c.scenario.latitude_deg, c.scenario.day_of_year); }

// Hybrid energy with separate rate vectors for the ground servers, the HAP
// servers and the traffic actually sent over each link.
EnergyBreakdown compose(const ModelConfig& c, const channel::LinkBudget& budget, std::span<const double> ground_rates,
                        std::span<const double> hap_compute_rates, std::span<const double> sent_rates,
                        bool check_ground) {
    const auto& sc = c.scenario;
    const double theta = c.workload.task_length_instr;
    EnergyBreakdown e = thermal::site_energy(c.server, c.cooling, ground_rates, theta, sc.window, check_ground);
    // With no HAP servers nothing is deployed, so no airship is flown.
    const double haps = hap_compute_rates.empty() ? 0.0 : sc.hap_count;
    e.payload_j = haps * payload_energy(hap_compute_rates, c.server, theta, sc.window);
    e.propulsion_j = haps * aero::propulsion_energy(c.platform, wind_speed(c), sc.window);
    const double offered = std::accumulate(sent_rates.begin(), sent_rates.end(), 0.0);
    if (offered > 0.0) e.transmission_j = haps * channel::transmission_energy(sent_rates, c.workload, budget, sc.window);
    return e;
}

}  // namespace

std::string to_string(Binding b) {
    switch (b) {
        case Binding::Harvest: return "harvest";
        case Binding::HighLoad: return "high-load";
        case Binding::Payload: return "payload";
    }
    return "unknown";
}

double payload_energy(std::span<const double> hap_rates, const ServerSpec& server, double task_length_instr,
                      const Window& window) {
    double e = 0.0;
    for (double r : hap_rates) e += thermal::compute_energy(server, r, task_length_instr, window);
    return e;
}

FlyingAssessment flying_condition(const ModelConfig& c) {
    const auto& sc = c.scenario;
    FlyingAssessment f;
    f.harvested_j = solar::mean_harvested_power(c.platform, sc.latitude_deg, sc.day_of_year) * sc.window.length();
    f.payload_j = payload_energy(sc.hap_rates, c.server, c.workload.task_length_instr, sc.window);
    f.propulsion_j = aero::propulsion_energy(c.platform, wind_speed(c), sc.window);
    f.slack_j = f.harvested_j - f.payload_j - f.propulsion_j;
    f.feasible = f.slack_j >= 0.0;
    return f;
}

LambdaMax lambda_max(double latitude_deg, double day, int hap_servers, const ModelConfig& c) {
    if (hap_servers < 1) throw ValidationError("lambda_max: at least one HAP server is required");
    const auto& s = c.server;
    const double theta = c.workload.task_length_instr;
    const double budget = solar::mean_harvested_power(c.platform, latitude_deg, day) -
                          aero::propulsion_power_reduced(c.platform, c.wind.speed(latitude_deg, day)) -
                          hap_servers * s.p_idle;
    LambdaMax m;
    m.closed_form = budget * s.service_rate_ips() / (hap_servers * theta * (s.p_peak - s.p_idle));
    m.threshold = high_load_threshold(s, theta);
    m.rate = std::clamp(m.closed_form, 0.0, m.threshold);
    if (hap_servers > max_hap_servers(c.platform, s)) {
        m.binding = Binding::Payload;
    } else if (m.closed_form >= m.threshold) {
        m.binding = Binding::HighLoad;
    } else {
        m.binding = Binding::Harvest;
    }
    return m;
}

EnergyBreakdown hybrid_total_energy(const ModelConfig& c, const channel::LinkBudget& budget) {
    const auto& sc = c.scenario;
    return compose(c, budget, sc.ground_rates, sc.hap_rates, sc.hap_rates, true);
}

EnergyBreakdown hybrid_total_energy(const ModelConfig& c) {
    return hybrid_total_energy(c, channel::make_link_budget(c.channel));
}

SavingReport saving(const ModelConfig& c, const channel::LinkBudget& budget, bool with_retransmission) {
    const auto& sc = c.scenario;
    SavingReport r;
    r.tdc = thermal::tdc_total_energy(c);
    r.e_tdc_j = r.tdc.total_j();

    const double offered = std::accumulate(sc.hap_rates.begin(), sc.hap_rates.end(), 0.0);
    r.drop_probability = offered > 0.0 ? channel::drop_probability(offered, c.channel, c.workload) : 0.0;
    r.dropped_rate = offered * r.drop_probability;

    const EnergyBreakdown delivered = hybrid_total_energy(c, budget);

    // Without retransmission the dropped share is served on the ground.
    EnergyBreakdown fallback = delivered;
    if (r.dropped_rate > 0.0) {
        std::vector<double> hap_rates(sc.hap_rates);
        for (double& x : hap_rates) x *= 1.0 - r.drop_probability;
        std::vector<double> ground_rates(sc.ground_rates);
        if (!ground_rates.empty()) {
            const double extra = sc.hap_count * r.dropped_rate / static_cast<double>(ground_rates.size());
            const double threshold = high_load_threshold(c.server, c.workload.task_length_instr);
            for (double& x : ground_rates) {
                x += extra;
                if (x > threshold * (1.0 + 1e-12)) r.ground_overloaded = true;
            }
        }
        fallback = compose(c, budget, ground_rates, hap_rates, sc.hap_rates, false);
    }

    r.hybrid = fallback;
    r.gross_saved_j = r.e_tdc_j - fallback.total_j();

    if (with_retransmission && r.dropped_rate > 0.0 &&
        offered >= channel::drop_free_rate(c.channel, c.workload)) {
        const double resend = sc.hap_count * channel::transmission_energy(std::span<const double>(&r.dropped_rate, 1),
                                                                          c.workload, budget, sc.window);
        const double budget_saved = r.gross_saved_j;
        if (resend > 0.0 && budget_saved > 0.0) {
            r.retransmissions = static_cast<long long>(std::ceil(budget_saved / resend));
        }
        if (r.retransmissions >= 1) {
            r.hybrid = delivered;
            r.hybrid.transmission_j += resend;
            r.retransmission_j = resend;
            r.gross_saved_j = r.e_tdc_j - delivered.total_j();
        }
    }

    r.e_hybrid_j = r.hybrid.total_j();
    r.saved_j = r.e_tdc_j - r.e_hybrid_j;
    r.saved_rate = r.e_tdc_j > 0.0 ? r.saved_j / r.e_tdc_j : 0.0;
    return r;
}

SavingReport saving(const ModelConfig& c, bool with_retransmission) {
    return saving(c, channel::make_link_budget(c.channel), with_retransmission);
}

}  // namespace hapdc::offload
