#pragma once

// Waiting time of an M/G/1 queue with multiple server vacations, the offloading
// round-trip time, and a discrete-event simulator for the exponential case.

#include <cstdint>
#include <span>
#include <vector>

#include "hapdc/config.hpp"

namespace hapdc::queueing {

struct QueueParams {
    double arrival_rate = 0.0;    // tasks/s
    double service_mean = 0.0;    // s
    double service_second = 0.0;  // s^2
    double vacation_mean = 0.0;   // s
    double vacation_second = 0.0; // s^2

    double utilization() const { return arrival_rate * service_mean; }

    /// Exponential service (rate mu_s) and exponential vacations (rate mu_v).
    static QueueParams exponential(double arrival_rate, double service_rate, double vacation_rate);
};

struct DelayReport {
    double mean_wait_s = 0.0;
    double rtt_s = 0.0;
    double total_delay_s = 0.0;
};

/// Mean residual time seen by an arrival. Throws InstabilityError for u >= 1.
double residual_time(const QueueParams& params);

/// lambda X2 / (2 (1 - u)) + V2 / (2 V). Throws InstabilityError for u >= 1.
double mean_wait(const QueueParams& params);

struct SimulationResult {
    double mean_wait_s = 0.0;
    double stderr_s = 0.0;
    double mean_queue_length = 0.0;  // waiting tasks seen by arrivals
    double queue_length_stderr = 0.0;
    long long tasks = 0;             // tasks measured after warm-up
};

/// FIFO M/M/1 with multiple exponential vacations. The first 2% of tasks are
/// discarded as warm-up; standard errors come from 20 batch means.
/// Throws InstabilityError for lambda >= mu_s and ValidationError for fewer than 1e4 tasks.
SimulationResult simulate_mm1_vacations(double service_rate, double vacation_rate, double arrival_rate,
                                        long long tasks, std::uint64_t seed);

/// 2 b / R with b = sum_i lambda_i theta* b* the offered bits per second.
/// Throws LinkError for a non-positive rate.
double rtt(std::span<const double> hap_rates, const WorkloadSpec& workload, double link_rate_bps);

struct DelayRow {
    double arrival_rate = 0.0;
    DelayReport report;
    bool rtt_dominates = false;  // RTT >= mean wait
};

/// Delay rows of one HAP server at each arrival rate; rates with u >= 1 are skipped.
std::vector<DelayRow> delay_comparison(std::span<const double> arrival_rates, const QueueSpec& queue,
                                       const WorkloadSpec& workload, double link_rate_bps);

}  // namespace hapdc::queueing
