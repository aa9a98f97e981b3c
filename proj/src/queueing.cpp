#include "hapdc/queueing.hpp"

#include <cmath>
#include <deque>
#include <numeric>
#include <random>

#include "hapdc/error.hpp"

namespace hapdc::queueing {

namespace {

constexpr int kBatches = 20;

void require_stable(const QueueParams& p) {
    if (!(p.utilization() < 1.0)) throw InstabilityError("queue utilization must be below 1");
}

struct BatchStats {
    double mean = 0.0;
    double stderr_ = 0.0;
};

BatchStats batch_means(const std::vector<double>& sums, long long per_batch) {
    BatchStats s;
    std::vector<double> means;
    means.reserve(sums.size());
    for (double x : sums) means.push_back(x / static_cast<double>(per_batch));
    s.mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
    double ss = 0.0;
    for (double m : means) ss += (m - s.mean) * (m - s.mean);
    const double k = static_cast<double>(means.size());
    s.stderr_ = std::sqrt(ss / (k - 1.0) / k);
    return s;
}

}  // namespace

QueueParams QueueParams::exponential(double arrival_rate, double service_rate, double vacation_rate) {
    if (!(service_rate > 0.0) || !(vacation_rate > 0.0)) throw ValidationError("QueueParams: rates must be positive");
    if (arrival_rate < 0.0) throw ValidationError("QueueParams: arrival rate must be non-negative");
    return {arrival_rate, 1.0 / service_rate, 2.0 / (service_rate * service_rate), 1.0 / vacation_rate,
            2.0 / (vacation_rate * vacation_rate)};
}

double residual_time(const QueueParams& p) {
    require_stable(p);
    const double u = p.utilization();
    return 0.5 * (p.arrival_rate * p.service_second + (1.0 - u) * p.vacation_second / p.vacation_mean);
}

double mean_wait(const QueueParams& p) {
    require_stable(p);
    const double u = p.utilization();
    return p.arrival_rate * p.service_second / (2.0 * (1.0 - u)) + p.vacation_second / (2.0 * p.vacation_mean);
}

SimulationResult simulate_mm1_vacations(double service_rate, double vacation_rate, double arrival_rate,
                                        long long tasks, std::uint64_t seed) {
    require_stable(QueueParams::exponential(arrival_rate, service_rate, vacation_rate));
    if (tasks < 10000) throw ValidationError("simulate_mm1_vacations: at least 1e4 tasks are required");
    if (!(arrival_rate > 0.0)) throw ValidationError("simulate_mm1_vacations: arrival rate must be positive");

    std::mt19937_64 engine(seed);
    std::exponential_distribution<double> interarrival(arrival_rate);
    std::exponential_distribution<double> service(service_rate);
    std::exponential_distribution<double> vacation(vacation_rate);

    const long long warmup = tasks / 50;
    const long long per_batch = (tasks - warmup) / kBatches;
    std::vector<double> wait_sums(kBatches, 0.0);
    std::vector<double> queue_sums(kBatches, 0.0);

    // Start times of tasks that have arrived but not yet entered service, in FIFO order.
    std::deque<double> waiting;
    double clock = 0.0;
    double free_at = 0.0;  // end of the last scheduled service

    for (long long n = 0; n < warmup + per_batch * kBatches; ++n) {
        clock += interarrival(engine);
        while (!waiting.empty() && waiting.front() <= clock) waiting.pop_front();
        const double seen = static_cast<double>(waiting.size());

        // An empty system means the server is on vacation; the vacation in
        // progress has an Exp(mu_v) residual at the arrival instant.
        const double start = clock < free_at ? free_at : clock + vacation(engine);
        free_at = start + service(engine);
        if (start > clock) waiting.push_back(start);

        if (n >= warmup) {
            const auto b = static_cast<std::size_t>((n - warmup) / per_batch);
            wait_sums[b] += start - clock;
            queue_sums[b] += seen;
        }
    }

    const BatchStats w = batch_means(wait_sums, per_batch);
    const BatchStats q = batch_means(queue_sums, per_batch);
    return {w.mean, w.stderr_, q.mean, q.stderr_, per_batch * kBatches};
}

double rtt(std::span<const double> hap_rates, const WorkloadSpec& workload, double link_rate_bps) {
    if (!(link_rate_bps > 0.0)) throw LinkError("rtt: link rate must be positive");
    const double total = std::accumulate(hap_rates.begin(), hap_rates.end(), 0.0);
    return 2.0 * total * workload.task_length_instr * workload.bits_per_instruction / link_rate_bps;
}

std::vector<DelayRow> delay_comparison(std::span<const double> arrival_rates, const QueueSpec& queue,
                                       const WorkloadSpec& workload, double link_rate_bps) {
    std::vector<DelayRow> rows;
    for (double lambda : arrival_rates) {
        const auto params = QueueParams::exponential(lambda, queue.service_rate, queue.vacation_rate);
        if (params.utilization() >= 1.0) continue;
        DelayRow row;
        row.arrival_rate = lambda;
        row.report.mean_wait_s = mean_wait(params);
        row.report.rtt_s = rtt(std::span<const double>(&lambda, 1), workload, link_rate_bps);
        row.report.total_delay_s = row.report.mean_wait_s + row.report.rtt_s;
        row.rtt_dominates = row.report.rtt_s >= row.report.mean_wait_s;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace hapdc::queueing
