#include "hapdc/sweep.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "hapdc/channel.hpp"
#include "hapdc/error.hpp"
#include "hapdc/offload.hpp"
#include "hapdc/parallel.hpp"
#include "hapdc/queueing.hpp"

namespace hapdc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMaxPoints = 1000000;
constexpr long long kDefaultDraws = 10000;
constexpr long long kDefaultTasks = 100000;

void apply_axis(ModelConfig& c, Axis axis, double v) {
    auto& sc = c.scenario;
    switch (axis) {
        case Axis::Latitude:
            sc.latitude_deg = v;
            break;
        case Axis::Day:
            sc.day_of_year = v;
            break;
        case Axis::HapServers:
            sc.hap_servers = static_cast<int>(std::lround(v));
            sc.hap_rates.assign(static_cast<std::size_t>(sc.hap_servers), 0.0);
            break;
        case Axis::ArrivalRate:
            break;
    }
}

// Model failures that are recorded per row; anything else aborts the sweep.
template <typename F>
std::string guarded(F&& f) {
    try {
        f();
        return "ok";
    } catch (const PolarError&) {
        return "polar";
    } catch (const OverloadError&) {
        return "overload";
    } catch (const InstabilityError&) {
        return "unstable";
    } catch (const LinkError&) {
        return "link";
    }
}

void require_axis(const SweepSpec& spec, std::initializer_list<Axis> allowed, const char* command) {
    for (Axis a : allowed) {
        if (a == spec.axis) return;
    }
    throw UsageError(std::string(command) + ": axis '" + to_string(spec.axis) + "' is not supported");
}

void check_axis_bounds(Axis axis, const std::vector<double>& values) {
    for (double v : values) {
        switch (axis) {
            case Axis::Latitude:
                if (std::abs(v) > 90.0) throw UsageError("latitude values must lie in [-90, 90]");
                break;
            case Axis::Day:
                if (v < 1.0 || v > 366.0) throw UsageError("day values must lie in [1, 366]");
                break;
            case Axis::HapServers:
                if (v < 0.0 || std::abs(v - std::round(v)) > 1e-9 || v > 100000.0) {
                    throw UsageError("hap_servers values must be non-negative integers");
                }
                break;
            case Axis::ArrivalRate:
                if (v < 0.0) throw UsageError("arrival_rate values must be non-negative");
                break;
        }
    }
}

std::vector<double> checked_values(const SweepSpec& spec) {
    auto values = axis_values(spec);
    check_axis_bounds(spec.axis, values);
    return values;
}

void set_uniform_rates(ModelConfig& c, double per_server) {
    auto& sc = c.scenario;
    sc.ground_rates.assign(static_cast<std::size_t>(sc.ground_servers), per_server);
    sc.hap_rates.assign(static_cast<std::size_t>(sc.hap_servers), per_server);
}

}  // namespace

std::string to_string(Axis axis) {
    switch (axis) {
        case Axis::Latitude: return "latitude";
        case Axis::Day: return "day";
        case Axis::HapServers: return "hap_servers";
        case Axis::ArrivalRate: return "arrival_rate";
    }
    return "unknown";
}

Axis parse_axis(const std::string& name) {
    if (name == "latitude" || name == "lat") return Axis::Latitude;
    if (name == "day") return Axis::Day;
    if (name == "hap_servers" || name == "servers") return Axis::HapServers;
    if (name == "arrival_rate" || name == "lambda") return Axis::ArrivalRate;
    throw UsageError("unknown axis '" + name + "' (expected latitude, day, hap_servers or arrival_rate)");
}

void parse_range(const std::string& text, SweepSpec& spec) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
    if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
        throw UsageError("range must have the form start:stop:step, got '" + text + "'");
    }
    auto number = [&](std::size_t from, std::size_t to) {
        const std::string part = text.substr(from, to - from);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != part.size() || !std::isfinite(v)) throw UsageError("range: '" + part + "' is not a number");
        return v;
    };
    spec.start = number(0, first);
    spec.stop = number(first + 1, second);
    spec.step = number(second + 1, text.size());
}

std::vector<double> axis_values(const SweepSpec& spec) {
    if (!(spec.step > 0.0)) throw UsageError("range step must be positive");
    if (spec.stop < spec.start) throw UsageError("range is empty: stop is below start");
    const double span = (spec.stop - spec.start) / spec.step;
    if (span + 1.0 > static_cast<double>(kMaxPoints)) throw UsageError("range has too many points");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = spec.start + static_cast<double>(i) * spec.step;
    return values;
}

SweepResult run_flying_sweep(const ModelConfig& config, const SweepSpec& spec) {
    require_axis(spec, {Axis::Latitude, Axis::Day, Axis::HapServers}, "fly");
    const auto values = checked_values(spec);
    struct Point {
        std::optional<offload::LambdaMax> m;
        std::string status;
    };
    std::vector<Point> points(values.size());
    parallel_for(values.size(), [&](std::size_t i) {
        ModelConfig c = config;
        apply_axis(c, spec.axis, values[i]);
        auto& p = points[i];
        if (c.scenario.hap_servers < 1) {
            p.status = "no-hap-servers";
            return;
        }
        p.status = guarded([&] { p.m = offload::lambda_max(c.scenario.latitude_deg, c.scenario.day_of_year,
                                                           c.scenario.hap_servers, c); });
    }, spec.workers);

    SweepResult r;
    r.table.columns = {to_string(spec.axis), "lambda_max", "closed_form", "threshold", "binding", "status"};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& p = points[i];
        if (p.m) {
            if (p.m->rate > 0.0) ++r.feasible_points;
            r.table.rows.push_back({values[i], p.m->rate, p.m->closed_form, p.m->threshold,
                                    offload::to_string(p.m->binding), p.status});
        } else {
            r.table.rows.push_back({values[i], kNaN, kNaN, kNaN, std::string(), p.status});
        }
    }
    return r;
}

SweepResult run_energy_sweep(const ModelConfig& config, const SweepSpec& spec) {
    const auto values = checked_values(spec);
    const auto budget = channel::make_link_budget(config.channel);
    struct Point {
        double lambda = kNaN;
        std::optional<offload::FlyingAssessment> fly;
        std::optional<offload::SavingReport> without;
        std::optional<offload::SavingReport> with;
        std::string status;
    };
    std::vector<Point> points(values.size());
    parallel_for(values.size(), [&](std::size_t i) {
        ModelConfig c = config;
        apply_axis(c, spec.axis, values[i]);
        auto& p = points[i];
        p.status = guarded([&] {
            const auto& sc = c.scenario;
            if (spec.axis == Axis::ArrivalRate) {
                p.lambda = values[i];
            } else {
                p.lambda = sc.hap_servers >= 1
                               ? offload::lambda_max(sc.latitude_deg, sc.day_of_year, sc.hap_servers, c).rate
                               : 0.0;
            }
            set_uniform_rates(c, p.lambda);
            p.fly = offload::flying_condition(c);
            p.without = offload::saving(c, budget, false);
            p.with = offload::saving(c, budget, true);
        });
    }, spec.workers);

    SweepResult r;
    r.table.columns = {to_string(spec.axis), "lambda",     "e_tdc",           "e_hybrid",     "saved_j",
                       "saved_rate",         "saved_rate_retx", "n_retx",     "drop_probability",
                       "flying_slack_j",     "ground_overloaded", "status"};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& p = points[i];
        if (p.status == "ok") {
            ++r.feasible_points;
            r.table.rows.push_back({values[i], p.lambda, p.without->e_tdc_j, p.without->e_hybrid_j,
                                    p.without->saved_j, p.without->saved_rate, p.with->saved_rate,
                                    p.with->retransmissions, p.without->drop_probability, p.fly->slack_j,
                                    static_cast<long long>(p.without->ground_overloaded), p.status});
        } else {
            r.table.rows.push_back(
                {values[i], p.lambda, kNaN, kNaN, kNaN, kNaN, kNaN, 0LL, kNaN, kNaN, 0LL, p.status});
        }
    }
    return r;
}

SweepResult run_outage_sweep(const ModelConfig& config, const SweepSpec& spec) {
    require_axis(spec, {Axis::ArrivalRate}, "outage");
    const auto values = checked_values(spec);
    const long long draws = spec.samples > 0 ? spec.samples : kDefaultDraws;
    if (draws > std::numeric_limits<int>::max()) throw UsageError("outage: too many samples");
    const auto curve = channel::empirical_ccdf(values, config.channel, config.workload, static_cast<int>(draws),
                                               spec.seed);
    const auto budget = channel::make_link_budget(config.channel);
    const int hap_servers = config.scenario.hap_servers;
    if (hap_servers < 1) throw UsageError("outage: the scenario needs at least one HAP server");

    struct Point {
        std::optional<offload::SavingReport> without;
        std::optional<offload::SavingReport> with;
        std::string status;
    };
    std::vector<Point> points(values.size());
    parallel_for(values.size(), [&](std::size_t i) {
        ModelConfig c = config;
        set_uniform_rates(c, values[i] / hap_servers);
        auto& p = points[i];
        p.status = guarded([&] {
            p.without = offload::saving(c, budget, false);
            p.with = offload::saving(c, budget, true);
        });
    }, spec.workers);

    SweepResult r;
    r.table.columns = {"lambda", "demand", "ccdf_lb", "ccdf_ub", "ccdf_mc", "ccdf_mc_se", "drop_rate",
                       "saved_rate_retx", "saved_rate", "n_retx", "status"};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& p = points[i];
        std::vector<Cell> row{values[i],
                              curve.demands[i],
                              curve.ccdf_lower[i],
                              curve.ccdf_upper[i],
                              curve.ccdf_empirical[i],
                              curve.empirical_se[i],
                              curve.drop_rate[i]};
        if (p.status == "ok") {
            ++r.feasible_points;
            row.insert(row.end(), {p.with->saved_rate, p.without->saved_rate, p.with->retransmissions});
        } else {
            row.insert(row.end(), {kNaN, kNaN, 0LL});
        }
        row.emplace_back(p.status);
        r.table.rows.push_back(std::move(row));
    }
    return r;
}

SweepResult run_delay_sweep(const ModelConfig& config, const SweepSpec& spec) {
    require_axis(spec, {Axis::ArrivalRate}, "delay");
    const auto values = checked_values(spec);
    const long long tasks = spec.samples > 0 ? spec.samples : kDefaultTasks;
    if (tasks < 10000) throw UsageError("delay: at least 10000 simulated tasks are required");
    const double link_rate = channel::make_link_budget(config.channel).ergodic_rate_bps;
    const auto& q = config.queue;

    struct Point {
        double analytic = kNaN;
        queueing::SimulationResult des{kNaN, kNaN, kNaN, kNaN, 0};
        double rtt = kNaN;
        std::string status;
    };
    std::vector<Point> points(values.size());
    parallel_for(values.size(), [&](std::size_t i) {
        auto& p = points[i];
        const double lambda = values[i];
        p.status = guarded([&] {
            p.analytic = queueing::mean_wait(queueing::QueueParams::exponential(lambda, q.service_rate, q.vacation_rate));
            p.rtt = queueing::rtt(std::span<const double>(&lambda, 1), config.workload, link_rate);
            if (lambda > 0.0) {
                p.des = queueing::simulate_mm1_vacations(q.service_rate, q.vacation_rate, lambda, tasks,
                                                         channel::derive_seed(spec.seed, i));
            }
        });
    }, spec.workers);

    SweepResult r;
    r.table.columns = {"lambda", "utilization", "analytic_wait", "des_wait", "des_se",
                       "rtt",    "total",       "rtt_dominates", "status"};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& p = points[i];
        const double u = values[i] / q.service_rate;
        if (p.status == "ok") ++r.feasible_points;
        const double total = p.analytic + p.rtt;
        r.table.rows.push_back({values[i], u, p.analytic, p.des.mean_wait_s, p.des.stderr_s, p.rtt, total,
                                static_cast<long long>(p.status == "ok" && p.rtt >= p.analytic), p.status});
    }
    return r;
}

}  // namespace hapdc
