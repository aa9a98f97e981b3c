#pragma once

// Batch sweeps behind the CLI subcommands. Points run on a worker pool; rows
// come back ordered by axis value. Per-point model errors are recorded in a
// `status` column and the sweep continues.

#include <cstdint>
#include <string>
#include <vector>

#include "hapdc/config.hpp"
#include "hapdc/output.hpp"

namespace hapdc {

enum class Axis { Latitude, Day, HapServers, ArrivalRate };

std::string to_string(Axis axis);

/// Accepts latitude, day, hap_servers (or servers), arrival_rate (or lambda). Throws UsageError.
Axis parse_axis(const std::string& name);

struct SweepSpec {
    Axis axis = Axis::Latitude;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
    std::uint64_t seed = 1;
    long long samples = 0;  // Monte Carlo draws or simulated tasks; 0 picks the command default
    unsigned workers = 0;   // 0 uses the hardware concurrency
};

/// Parses "start:stop:step" into `spec`. Throws UsageError.
void parse_range(const std::string& text, SweepSpec& spec);

/// start, start + step, ... up to stop inclusive. Throws UsageError for an empty or oversized range.
std::vector<double> axis_values(const SweepSpec& spec);

struct SweepResult {
    Table table;
    std::size_t feasible_points = 0;
};

/// Columns: <axis>, lambda_max, closed_form, threshold, binding, status.
SweepResult run_flying_sweep(const ModelConfig& config, const SweepSpec& spec);

/// Per-server rate is the axis value on the arrival_rate axis, otherwise lambda_max
/// at the point; ground and HAP servers share it.
SweepResult run_energy_sweep(const ModelConfig& config, const SweepSpec& spec);

/// arrival_rate axis only: total offloaded rate per HAP link.
SweepResult run_outage_sweep(const ModelConfig& config, const SweepSpec& spec);

/// arrival_rate axis only: per-server rate of the queue under study.
SweepResult run_delay_sweep(const ModelConfig& config, const SweepSpec& spec);

}  // namespace hapdc
