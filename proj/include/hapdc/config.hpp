#pragma once

// Domain types and parameters of the terrestrial + HAP data-center model.
//
// Every quantity is SI except service rates (MIPS) and arrival rates
// (tasks/s). Configuration files are JSON; any omitted key keeps the default
// listed here. See config/default.json for the canonical example.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hapdc {

struct ServerSpec {
    double service_rate_mips = 580.0;   // mu
    double p_idle = 150.0;              // W
    double p_peak = 300.0;              // W
    double desired_utilization = 1.0;  // u-bar, in (0, 1]
    double heat_capacity = 340.0;       // J/K
    double thermal_resistance = 0.34;   // K/W
    double mass = 9.0;                  // kg

    double service_rate_ips() const { return service_rate_mips * 1e6; }

    bool operator==(const ServerSpec&) const = default;
};

struct WorkloadSpec {
    static constexpr double kSmallTaskLength = 1e6;
    static constexpr double kLargeTaskLength = 1e8;

    double arrival_rate_total = 0.0;           // tasks/s, spread evenly when no rate vectors are given
    double task_length_instr = kSmallTaskLength;  // theta*
    double bits_per_instruction = 4e-3;        // b*
    double overhead_ratio = 1.1;               // beta >= 1

    bool operator==(const WorkloadSpec&) const = default;
};

/// Optional breakdown of the CRAC fan power: V * dp / (eta_fan * eta_motor).
struct FanDetail {
    double air_flow_rate = 0.0;     // m^3/s
    double pressure_loss = 0.0;     // Pa
    double fan_efficiency = 1.0;
    double motor_efficiency = 1.0;

    double power() const { return air_flow_rate * pressure_loss / (fan_efficiency * motor_efficiency); }

    bool operator==(const FanDetail&) const = default;
};

struct CoolingSpec {
    int crac_count = 4;                     // J
    double supply_temp = 299.15;            // K, CRAC outlet T_j^out
    double fan_power = 500.0;               // W per CRAC (ignored when `fan` is set)
    std::optional<FanDetail> fan;
    double air_heat_capacity_flow = 50.0;   // W/K, C_air * f_air
    double recirculation_raise = 2.0;       // K, gamma
    double crac_influence_rate = 0.05;      // 1/s, nu
    double t_in_initial = 310.0;            // K
    double t_cpu_initial = 318.0;           // K
    bool cop_in_celsius = true;             // false evaluates the COP quadratic on raw kelvin

    double fan_power_w() const { return fan ? fan->power() : fan_power; }

    bool operator==(const CoolingSpec&) const = default;
};

struct HapPlatform {
    double pv_area = 8000.0;               // m^2
    double pv_efficiency = 0.4;
    double propeller_efficiency = 0.8;
    double air_density = 0.08891;          // kg/m^3
    double air_viscosity = 1.422e-5;       // N s/m^2
    double body_length = 115.0;            // m
    double body_diameter = 34.0;           // m
    double hap_velocity = 8.0;             // m/s
    double drag_constant = 1.8;            // N_C
    double payload_capacity = 450.0;       // kg
    double rack_mass = 363.0;              // kg
    double harvest_hours_divisor = 24.0;   // mean-power divisor applied in the flying condition

    double fitness_ratio() const { return body_length / body_diameter; }

    bool operator==(const HapPlatform&) const = default;
};

enum class Precoding { Isotropic, Mrt };
enum class DemandMapping { Bandwidth, Identity };

struct ChannelConfig {
    int tx_antennas = 2;                  // N
    int rx_antennas = 16;                 // M
    double carrier_hz = 31e9;
    double bandwidth_hz = 100e6;
    double rician_factor = 10.0;          // zeta
    double ref_gain = 1e-6;               // Psi0 (-60 dB at 1 m)
    double link_distance = 20e3;          // m
    double tx_power = 10.0;               // W, ||q||^2
    double noise_psd_dbm_hz = -174.0;
    std::optional<double> noise_power;    // W; derived from the PSD over B when unset
    std::optional<double> avg_rx_snr;     // eta'; derived when unset
    Precoding precoding = Precoding::Isotropic;
    DemandMapping demand_mapping = DemandMapping::Bandwidth;
    int rate_samples = 4096;              // Monte Carlo draws for the ergodic rate
    unsigned long long rate_seed = 20240101ULL;

    double path_gain() const { return ref_gain / (link_distance * link_distance); }
    double noise_power_w() const;
    /// Average SNR at each receive antenna per transmit stream.
    double rx_snr() const;

    bool operator==(const ChannelConfig&) const = default;
};

struct QueueSpec {
    double service_rate = 4000.0;   // mu_s, tasks/s
    double vacation_rate = 2.0;     // mu_v, 1/s

    bool operator==(const QueueSpec&) const = default;
};

/// Wind speed at (latitude, day). Constant unless a lookup table is loaded.
struct WindModel {
    double constant_speed = 20.0;             // m/s
    std::optional<std::string> table_path;    // CSV: latitude_deg,day,speed
    std::vector<double> table_latitudes;
    std::vector<double> table_days;
    std::vector<double> table_speeds;         // row-major [latitude][day]

    double speed(double latitude_deg, double day) const;

    bool operator==(const WindModel&) const = default;
};

struct Window {
    double t1 = 0.0;
    double t2 = 86400.0;

    double length() const { return t2 - t1; }

    bool operator==(const Window&) const = default;
};

struct Scenario {
    double latitude_deg = 60.0;
    double day_of_year = 150.0;
    Window window;
    int ground_servers = 50;   // I
    int hap_servers = 40;      // I'
    int hap_count = 1;
    std::vector<double> ground_rates;   // length I, tasks/s
    std::vector<double> hap_rates;      // length I', tasks/s

    bool operator==(const Scenario&) const = default;
};

struct ModelConfig {
    ServerSpec server;
    WorkloadSpec workload;
    CoolingSpec cooling;
    HapPlatform platform;
    ChannelConfig channel;
    QueueSpec queue;
    WindModel wind;
    Scenario scenario;

    bool operator==(const ModelConfig&) const = default;
};

/// Parses JSON text. Empty or whitespace-only text yields the defaults.
/// Throws ConfigError on malformed input and ValidationError on a violated invariant.
/// Relative wind-table paths resolve against `base_dir`.
ModelConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ModelConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form, stable key order. Re-parses to an equal configuration.
std::string serialize_config(const ModelConfig& config);

/// Throws ValidationError naming the first violated invariant.
void validate(const ModelConfig& config);

/// Fills empty rate vectors (even split of workload.arrival_rate_total, or zeros)
/// and resizes nothing else. Called by parse_config.
void complete_rates(ModelConfig& config);

/// floor((payload - rack) / server mass), clamped at 0.
int max_hap_servers(const HapPlatform& platform, const ServerSpec& server);

/// `servers` equal shares of `total_rate`. Throws ValidationError for zero servers.
std::vector<double> uniform_split(double total_rate, int servers);

/// Utilization theta* lambda / mu of one server.
double utilization(const ServerSpec& server, double rate, double task_length_instr);

/// Per-server arrival rate at which utilization reaches u-bar.
double high_load_threshold(const ServerSpec& server, double task_length_instr);

/// 64-bit FNV-1a of the canonical serialization; used in output manifests.
unsigned long long config_hash(const ModelConfig& config);

}  // namespace hapdc
