#include "hapdc/thermal.hpp"

#include <cmath>

#include "hapdc/error.hpp"

namespace hapdc::thermal {

namespace {

constexpr double kKelvinOffset = 273.15;

double steady_inlet(const CoolingSpec& c) { return c.supply_temp + c.recirculation_raise; }

}  // namespace

double compute_power_unchecked(const ServerSpec& server, double rate, double task_length_instr) {
    return server.p_idle + (server.p_peak - server.p_idle) * utilization(server, rate, task_length_instr);
}

double compute_power(const ServerSpec& server, double rate, double task_length_instr) {
    if (rate < 0.0) throw ValidationError("compute_power: arrival rate must be non-negative");
    const double u = utilization(server, rate, task_length_instr);
    if (u > server.desired_utilization * (1.0 + 1e-12)) {
        throw OverloadError("server utilization " + std::to_string(u) + " exceeds desired utilization " +
                            std::to_string(server.desired_utilization));
    }
    return compute_power_unchecked(server, rate, task_length_instr);
}

double compute_energy(const ServerSpec& server, double rate, double task_length_instr, const Window& window) {
    return compute_power(server, rate, task_length_instr) * window.length();
}

double cop(double t_out_kelvin, bool celsius) {
    const double t = celsius ? t_out_kelvin - kKelvinOffset : t_out_kelvin;
    return 0.0068 * t * t + 0.008 * t + 0.458;
}

ThermalTrace::ThermalTrace(const ServerLoad& load, const CoolingSpec& cooling) : load_(load), cooling_(cooling) {}

double ThermalTrace::t_in(double t) const {
    const double target = steady_inlet(cooling_);
    return target + (cooling_.t_in_initial - target) * std::exp(-cooling_.crac_influence_rate * t);
}

double ThermalTrace::t_cpu(double t) const {
    const double r = load_.thermal_resistance;
    const double inlet = t_in(t);
    const double rise = r * load_.compute_power;
    return inlet + rise + (cooling_.t_cpu_initial - inlet - rise) * std::exp(-t / (r * load_.heat_capacity));
}

double ThermalTrace::t_out(double t) const {
    const double k = 1.0 / (cooling_.air_heat_capacity_flow * load_.thermal_resistance);
    return (1.0 - k) * t_in(t) + k * t_cpu(t);
}

double ThermalTrace::heat_removed(double t) const { return cooling_.air_heat_capacity_flow * (t_out(t) - t_in(t)); }

double heat_removed(std::span<const ServerLoad> servers, const CoolingSpec& c, double t) {
    const double target = steady_inlet(c);
    double q = 0.0;
    for (const auto& s : servers) {
        const double rc = s.thermal_resistance * s.heat_capacity;
        const double decay = std::exp(-t / rc);
        const double mixed = std::exp(-(c.crac_influence_rate + 1.0 / rc) * t);
        q += (s.thermal_resistance * (1.0 - decay) * s.compute_power + (c.t_cpu_initial - target) * decay -
              (c.t_in_initial - target) * mixed) /
             s.thermal_resistance;
    }
    return q;
}

double cooling_energy(std::span<const ServerLoad> servers, const CoolingSpec& c, const Window& w) {
    const double dt = w.length();
    if (dt == 0.0) return 0.0;
    const double target = steady_inlet(c);
    const double performance = cop(c.supply_temp, c.cop_in_celsius);
    double heat = 0.0;
    for (const auto& s : servers) {
        const double rc = s.thermal_resistance * s.heat_capacity;
        const double nu_rc = c.crac_influence_rate * rc + 1.0;
        const double k = nu_rc / rc;
        heat += s.heat_capacity * (c.t_cpu_initial - target) * (std::exp(-w.t1 / rc) - std::exp(-w.t2 / rc));
        heat += s.heat_capacity * (c.t_in_initial - target) * (std::exp(-k * w.t2) - std::exp(-k * w.t1)) / nu_rc;
        heat += s.compute_power * dt;
        heat += s.compute_power * rc * (std::exp(-w.t2 / rc) - std::exp(-w.t1 / rc));
    }
    return c.fan_power_w() * dt + heat / performance;
}

std::vector<int> crac_partition(int servers, int crac_count) {
    if (crac_count < 1) throw ValidationError("crac_partition: at least one CRAC is required");
    std::vector<int> counts(static_cast<std::size_t>(crac_count), servers / crac_count);
    for (int j = 0; j < servers % crac_count; ++j) ++counts[static_cast<std::size_t>(j)];
    return counts;
}

std::vector<ServerLoad> make_loads(const ServerSpec& server, std::span<const double> rates, double task_length_instr,
                                   bool check_overload) {
    std::vector<ServerLoad> loads;
    loads.reserve(rates.size());
    for (double r : rates) {
        const double p = check_overload ? compute_power(server, r, task_length_instr)
                                        : compute_power_unchecked(server, r, task_length_instr);
        loads.push_back({p, server.heat_capacity, server.thermal_resistance});
    }
    return loads;
}

EnergyBreakdown site_energy(const ServerSpec& server, const CoolingSpec& cooling, std::span<const double> rates,
                            double task_length_instr, const Window& window, bool check_overload) {
    const auto loads = make_loads(server, rates, task_length_instr, check_overload);
    EnergyBreakdown e;
    for (const auto& l : loads) e.compute_j += l.compute_power * window.length();
    const auto counts = crac_partition(static_cast<int>(loads.size()), cooling.crac_count);
    std::size_t offset = 0;
    for (int n : counts) {
        const std::span<const ServerLoad> group(loads.data() + offset, static_cast<std::size_t>(n));
        e.cooling_j += cooling_energy(group, cooling, window);
        offset += static_cast<std::size_t>(n);
    }
    return e;
}

EnergyBreakdown tdc_total_energy(const ModelConfig& config) {
    const auto& sc = config.scenario;
    std::vector<double> rates(sc.ground_rates.begin(), sc.ground_rates.end());
    for (int k = 0; k < sc.hap_count; ++k) rates.insert(rates.end(), sc.hap_rates.begin(), sc.hap_rates.end());
    return site_energy(config.server, config.cooling, rates, config.workload.task_length_instr, sc.window);
}

}  // namespace hapdc::thermal
