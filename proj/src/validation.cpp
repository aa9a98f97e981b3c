#include "hapdc/validation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <fmt/format.h>

#include "hapdc/aero.hpp"
#include "hapdc/channel.hpp"
#include "hapdc/offload.hpp"
#include "hapdc/parallel.hpp"
#include "hapdc/queueing.hpp"
#include "hapdc/solar.hpp"
#include "hapdc/special.hpp"
#include "hapdc/sweep.hpp"
#include "hapdc/thermal.hpp"

namespace hapdc::validation {

namespace {

using Clock = std::chrono::steady_clock;
using boost::math::quadrature::gauss_kronrod;

template <typename F>
CheckResult timed(std::string id, std::string name, F&& body) {
    const auto t0 = Clock::now();
    CheckResult r{std::move(id), std::move(name), false, {}, 0.0};
    body(r);
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Q_m(a, y) as the integral of the noncentral chi density over [y, inf).
double marcum_quadrature(int m, double a, double y) {
    auto density = [&](double x) {
        if (x <= 0.0) return 0.0;
        const double log_f = m * std::log(x) - (m - 1) * std::log(a) - 0.5 * (x * x + a * a) +
                             special::log_bessel_i(m - 1, a * x);
        return std::exp(log_f);
    };
    const double mode = std::sqrt(a * a + 2.0 * m);
    const double upper = std::max(y, mode) + 40.0;
    const std::array<double, 4> cuts{y, std::max(y, mode - 8.0), std::max(y, mode), std::max(y, mode + 8.0)};
    double q = 0.0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = i + 1 < cuts.size() ? cuts[i + 1] : upper;
        if (hi > lo) q += gauss_kronrod<double, 61>::integrate(density, lo, hi, 12, 1e-11);
    }
    return q;
}

double circular_day_distance(int a, int b) {
    const int d = std::abs(a - b) % 365;
    return std::min(d, 365 - d);
}

}  // namespace

CheckResult special_functions() {
    return timed("1", "marcum_q vs quadrature; Q_1(1,1) identity", [](CheckResult& r) {
        std::mt19937_64 rng(11);
        double worst = 0.0;
        std::string worst_at;
        for (int i = 0; i < 200; ++i) {
            const int m = 1 + (i * 37) % 64;
            const double a = uniform(rng, 0.05, 25.0);
            const double y = uniform(rng, 0.0, a + std::sqrt(2.0 * m) + 8.0);
            const double err = std::abs(special::marcum_q(m, a, y) - marcum_quadrature(m, a, y));
            if (err > worst) {
                worst = err;
                worst_at = fmt::format("m={} a={:.4g} y={:.4g}", m, a, y);
            }
        }
        const double identity = 0.5 * (1.0 + std::exp(-1.0) * boost::math::cyl_bessel_i(0, 1.0));
        const double id_err = std::abs(special::marcum_q(1, 1.0, 1.0) - identity);
        r.pass = worst <= 1e-8 && id_err <= 1e-12;
        r.detail = fmt::format("max |err| {:.3g} over 200 points ({}); Q_1(1,1) err {:.3g}", worst, worst_at, id_err);
    });
}

CheckResult outage_sandwich(const Options& options) {
    return timed("2", "empirical CCDF inside [LB - 3 SE, UB + 3 SE]", [&](CheckResult& r) {
        std::mt19937_64 rng(options.seed);
        const std::array<double, 5> zetas{0.0, 5.0, 10.0, 20.0, 10.0};
        int violations = 0;
        int points = 0;
        std::string configs;
        for (std::size_t k = 0; k < zetas.size(); ++k) {
            ChannelConfig ch;
            ch.tx_antennas = 1 + static_cast<int>(rng() % 4);
            ch.rx_antennas = 2 + static_cast<int>(rng() % 15);
            ch.rician_factor = k == 4 ? zetas[rng() % 4] : zetas[k];
            ch.tx_power = uniform(rng, 1.0, 100.0);
            ch.link_distance = uniform(rng, 15e3, 30e3);
            ch.demand_mapping = DemandMapping::Identity;
            WorkloadSpec w;
            double s_hi = 0.25;
            while (channel::ccdf_upper(s_hi, ch) > 1e-5) s_hi *= 1.25;
            std::vector<double> grid;
            for (int i = 1; i <= 40; ++i) grid.push_back(s_hi * i / 40.0);
            const auto curve =
                channel::empirical_ccdf(grid, ch, w, options.outage_draws, channel::derive_seed(options.seed, k));
            for (std::size_t i = 0; i < grid.size(); ++i) {
                ++points;
                const double se3 = 3.0 * curve.empirical_se[i];
                if (curve.ccdf_empirical[i] < curve.ccdf_lower[i] - se3 ||
                    curve.ccdf_empirical[i] > curve.ccdf_upper[i] + se3) {
                    ++violations;
                }
            }
            configs += fmt::format("{}(N={},M={},z={:g})", k ? " " : "", ch.tx_antennas, ch.rx_antennas,
                                   ch.rician_factor);
        }
        r.pass = violations == 0;
        r.detail = fmt::format("{} violations / {} points, {} draws each; {}", violations, points,
                               options.outage_draws, configs);
    });
}

CheckResult queueing_des(const Options& options) {
    return timed("3", "DES mean wait vs closed form (mu_s = mu_v = 1)", [&](CheckResult& r) {
        const double mu_s = 1.0;
        const double mu_v = 1.0;
        constexpr std::size_t kLoads = 9;
        std::array<queueing::SimulationResult, kLoads + 1> sims;
        parallel_for(kLoads + 1, [&](std::size_t i) {
            const double u = i < kLoads ? 0.1 * static_cast<double>(i + 1) : 1e-4;
            sims[i] = queueing::simulate_mm1_vacations(mu_s, mu_v, u * mu_s, options.queue_tasks,
                                                       channel::derive_seed(options.seed, 100 + i));
        });
        bool ok = true;
        double worst_rel = 0.0;
        double worst_z = 0.0;
        double worst_u = 0.0;
        double worst_se = 0.0;
        for (std::size_t i = 0; i < kLoads; ++i) {
            const double u = 0.1 * static_cast<double>(i + 1);
            const double w = queueing::mean_wait(queueing::QueueParams::exponential(u * mu_s, mu_s, mu_v));
            const double diff = std::abs(sims[i].mean_wait_s - w);
            const double rel = diff / w;
            const double z = diff / sims[i].stderr_s;
            if (rel > worst_rel) {
                worst_rel = rel;
                worst_u = u;
                worst_se = sims[i].stderr_s / w;
            }
            worst_z = std::max(worst_z, z);
            ok = ok && rel <= 0.02 && z <= 3.0;
        }
        const auto& low = sims[kLoads];
        const double limit_z = std::abs(low.mean_wait_s - 1.0 / mu_v) / low.stderr_s;
        ok = ok && limit_z <= 3.0;
        r.pass = ok;
        r.detail = fmt::format("u=0.1..0.9 with {} tasks: max rel err {:.3g} at u={:.1f} (rel SE {:.3g}), max |z| "
                               "{:.2f}; u->0 limit |z| {:.2f}",
                               options.queue_tasks, worst_rel, worst_u, worst_se, worst_z, limit_z);
    });
}

CheckResult thermal_closed_form(const Options& options) {
    return timed("4", "cooling energy closed form vs quadrature; steady heat removal", [&](CheckResult& r) {
        std::mt19937_64 rng(options.seed + 4);
        double worst = 0.0;
        double worst_limit = 0.0;
        for (int k = 0; k < 100; ++k) {
            CoolingSpec c;
            c.supply_temp = uniform(rng, 288.0, 305.0);
            c.fan_power = uniform(rng, 0.0, 1000.0);
            c.air_heat_capacity_flow = uniform(rng, 10.0, 200.0);
            c.recirculation_raise = uniform(rng, 0.0, 5.0);
            c.crac_influence_rate = uniform(rng, 0.005, 0.5);
            c.t_in_initial = uniform(rng, 295.0, 320.0);
            c.t_cpu_initial = uniform(rng, 300.0, 340.0);
            const int n = 1 + static_cast<int>(rng() % 8);
            std::vector<thermal::ServerLoad> loads;
            double max_rc = 0.0;
            double total_power = 0.0;
            for (int i = 0; i < n; ++i) {
                thermal::ServerLoad s{uniform(rng, 100.0, 400.0), uniform(rng, 100.0, 1000.0), uniform(rng, 0.1, 1.0)};
                max_rc = std::max(max_rc, s.heat_capacity * s.thermal_resistance);
                total_power += s.compute_power;
                loads.push_back(s);
            }
            Window w;
            w.t1 = uniform(rng, 0.0, 1000.0);
            w.t2 = w.t1 + uniform(rng, 10.0, 20000.0);

            const double performance = thermal::cop(c.supply_temp, c.cop_in_celsius);
            auto integrand = [&](double t) {
                double q = 0.0;
                for (const auto& s : loads) q += thermal::ThermalTrace(s, c).heat_removed(t);
                return q / performance;
            };
            constexpr int kPieces = 64;
            double quad = c.fan_power_w() * w.length();
            for (int p = 0; p < kPieces; ++p) {
                const double lo = w.t1 + w.length() * p / kPieces;
                const double hi = w.t1 + w.length() * (p + 1) / kPieces;
                quad += gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 15, 1e-14);
            }
            const double closed = thermal::cooling_energy(loads, c, w);
            worst = std::max(worst, std::abs(closed - quad) / std::abs(quad));
            const double late = thermal::heat_removed(loads, c, 30.0 * max_rc);
            worst_limit = std::max(worst_limit, std::abs(late - total_power) / total_power);
        }
        r.pass = worst <= 1e-8 && worst_limit <= 1e-9;
        r.detail = fmt::format("max rel err {:.3g} over 100 instances; heat removed at 30 RC rel err {:.3g}",
                               worst, worst_limit);
    });
}

CheckResult propulsion_duality(const Options& options) {
    return timed("5", "propulsion power: drag-coefficient form vs reduced form", [&](CheckResult& r) {
        std::mt19937_64 rng(options.seed + 5);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            HapPlatform p;
            p.air_density = uniform(rng, 0.02, 1.3);
            p.air_viscosity = uniform(rng, 1e-5, 2e-5);
            p.body_length = uniform(rng, 30.0, 250.0);
            p.body_diameter = uniform(rng, 5.0, 60.0);
            p.hap_velocity = uniform(rng, 1.0, 40.0);
            p.drag_constant = uniform(rng, 0.5, 3.0);
            p.propeller_efficiency = uniform(rng, 0.3, 1.0);
            const double v = uniform(rng, 0.1, 50.0);
            const double a = aero::propulsion_power(p, v);
            const double b = aero::propulsion_power_reduced(p, v);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
        r.pass = worst <= 1e-12;
        r.detail = fmt::format("max rel diff {:.3g} over 1000 draws", worst);
    });
}

CheckResult solar_geometry() {
    return timed("6", "declination anchors; equatorial day fraction", [](CheckResult& r) {
        const double d0 = solar::declination(79.75);
        const double d1 = solar::declination(171.0);
        bool half = true;
        for (double d = 1.0; d <= 366.0; d += 0.25) half = half && solar::day_fraction(0.0, d) == 0.5;
        r.pass = d0 == 0.0 && d1 == solar::kObliquity && half;
        r.detail = fmt::format("delta(79.75)={:g}, delta(171)={:.17g}, day_fraction(0,d)=0.5 for all d: {}", d0, d1,
                               half ? "yes" : "no");
    });
}

CheckResult flying_root(const ModelConfig& config) {
    return timed("7", "flying condition binds at lambda_max", [&](CheckResult& r) {
        const int servers = config.scenario.hap_servers;
        int binding = 0;
        double worst = 0.0;
        for (double lat : {-41.0, -39.0, -37.0, -35.0}) {
            for (double day : {150.0, 160.0, 170.0, 180.0, 190.0}) {
                const auto m = offload::lambda_max(lat, day, servers, config);
                if (!(m.closed_form > 0.0 && m.closed_form < m.threshold)) continue;
                ++binding;
                ModelConfig c = config;
                c.scenario.latitude_deg = lat;
                c.scenario.day_of_year = day;
                c.scenario.hap_rates.assign(static_cast<std::size_t>(servers), m.rate);
                const auto f = offload::flying_condition(c);
                worst = std::max(worst, std::abs(f.slack_j) / f.harvested_j);
            }
        }
        r.pass = binding == 20 && worst <= 1e-9;
        r.detail = fmt::format("{}/20 grid points bind below the threshold; max |slack|/E_harv {:.3g}", binding, worst);
    });
}

std::vector<CheckResult> paper_trends(const ModelConfig& config) {
    std::vector<CheckResult> out;
    const int servers = config.scenario.hap_servers;

    out.push_back(timed("8a", "lambda_max peaks near the local summer solstice", [&](CheckResult& r) {
        auto peak_day = [&](double lat) {
            int best_day = 1;
            double best = -std::numeric_limits<double>::infinity();
            for (int d = 1; d <= 365; ++d) {
                const double v = offload::lambda_max(lat, d, servers, config).closed_form;
                if (v > best) {
                    best = v;
                    best_day = d;
                }
            }
            return best_day;
        };
        const int north = peak_day(40.0);
        const int south = peak_day(-40.0);
        r.pass = circular_day_distance(north, 172) <= 10 && circular_day_distance(south, 355) <= 10;
        r.detail = fmt::format("harvest-root peak at day {} (l=+40) and day {} (l=-40)", north, south);
    }));

    out.push_back(timed("8b", "per-server lambda_max decreases with I'", [&](CheckResult& r) {
        const double lat = config.scenario.latitude_deg;
        const double day = config.scenario.day_of_year;
        bool strict = true;
        bool monotone = true;
        auto prev = offload::lambda_max(lat, day, 1, config);
        for (int n = 2; n <= 50; ++n) {
            const auto cur = offload::lambda_max(lat, day, n, config);
            strict = strict && cur.closed_form < prev.closed_form;
            monotone = monotone && cur.rate <= prev.rate;
            prev = cur;
        }
        const auto at10 = offload::lambda_max(lat, day, 10, config);
        const auto at40 = offload::lambda_max(lat, day, 40, config);
        r.pass = strict && monotone;
        r.detail = fmt::format("l={:g} d={:g}: harvest root {:.4g} (I'=10) -> {:.4g} (I'=40), strictly decreasing "
                               "over I'=1..50: {}",
                               lat, day, at10.closed_form, at40.closed_form, strict ? "yes" : "no");
    }));

    out.push_back(timed("8c", "saved_rate in [5%, 25%] for latitudes -60..60, day 150", [&](CheckResult& r) {
        ModelConfig c = config;
        c.scenario.day_of_year = 150.0;
        c.scenario.hap_servers = 40;
        SweepSpec spec;
        spec.axis = Axis::Latitude;
        spec.start = -60.0;
        spec.stop = 60.0;
        spec.step = 10.0;
        const auto res = run_energy_sweep(c, spec);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        bool ok = res.feasible_points == res.table.rows.size();
        for (const auto& row : res.table.rows) {
            const double s = std::get<double>(row[5]);
            if (!std::isfinite(s)) continue;
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        ok = ok && lo >= 0.05 && hi <= 0.25;
        r.pass = ok;
        r.detail = fmt::format("saved_rate range [{:.4f}, {:.4f}] over {} latitudes", lo, hi, res.table.rows.size());
    }));

    out.push_back(timed("8d", "retransmission never lowers saved_rate; strict above lambda_drop*", [&](CheckResult& r) {
        const double full = servers * high_load_threshold(config.server, config.workload.task_length_instr);
        const double drop_free = channel::drop_free_rate(config.channel, config.workload);
        SweepSpec spec;
        spec.axis = Axis::ArrivalRate;
        spec.start = 0.0;
        spec.stop = full;
        spec.step = full / 58.0;
        spec.samples = 2000;
        const auto res = run_outage_sweep(config, spec);
        bool ok = true;
        int above = 0;
        int strict = 0;
        for (const auto& row : res.table.rows) {
            if (std::get<std::string>(row.back()) != "ok") continue;
            const double lambda = std::get<double>(row[0]);
            const double with = std::get<double>(row[7]);
            const double without = std::get<double>(row[8]);
            ok = ok && with >= without;
            if (lambda > drop_free) {
                ++above;
                if (with > without) ++strict;
            }
        }
        r.pass = ok && above > 0 && strict == above;
        r.detail = fmt::format("lambda_drop* {:.6g} tasks/s; {} grid points above it, {} strictly improved", drop_free,
                               above, strict);
    }));

    out.push_back(timed("8e", "larger task length moves the outage onset down", [&](CheckResult& r) {
        WorkloadSpec small = config.workload;
        WorkloadSpec large = config.workload;
        small.task_length_instr = WorkloadSpec::kSmallTaskLength;
        large.task_length_instr = WorkloadSpec::kLargeTaskLength;
        const double a = channel::drop_free_rate(config.channel, small);
        const double b = channel::drop_free_rate(config.channel, large);
        r.pass = b < a;
        r.detail = fmt::format("lambda_drop* {:.6g} tasks/s (theta*=1e6) vs {:.6g} tasks/s (theta*=1e8)", a, b);
    }));

    out.push_back(timed("8f", "small theta*: wait > RTT; large theta*: an RTT >= wait band", [&](CheckResult& r) {
        const double rate = channel::make_link_budget(config.channel).ergodic_rate_bps;
        std::vector<double> lambdas;
        for (int i = 0; i < 100; ++i) lambdas.push_back(config.queue.service_rate * 0.99 * i / 99.0);
        WorkloadSpec small = config.workload;
        WorkloadSpec large = config.workload;
        small.task_length_instr = WorkloadSpec::kSmallTaskLength;
        large.task_length_instr = WorkloadSpec::kLargeTaskLength;
        const auto a = queueing::delay_comparison(lambdas, config.queue, small, rate);
        const auto b = queueing::delay_comparison(lambdas, config.queue, large, rate);
        const bool small_ok = std::none_of(a.begin(), a.end(), [](const auto& row) { return row.rtt_dominates; });
        double band_lo = std::numeric_limits<double>::quiet_NaN();
        double band_hi = band_lo;
        for (const auto& row : b) {
            if (!row.rtt_dominates) continue;
            if (std::isnan(band_lo)) band_lo = row.arrival_rate;
            band_hi = row.arrival_rate;
        }
        r.pass = small_ok && !std::isnan(band_lo);
        r.detail = fmt::format("small theta*: RTT < wait at all {} points: {}; large theta*: RTT >= wait for "
                               "lambda in [{:.4g}, {:.4g}] tasks/s",
                               a.size(), small_ok ? "yes" : "no", band_lo, band_hi);
    }));
    return out;
}

std::vector<CheckResult> run_all(const ModelConfig& config, const Options& options) {
    std::vector<CheckResult> out{special_functions(),       outage_sandwich(options),    queueing_des(options),
                                 thermal_closed_form(options), propulsion_duality(options), solar_geometry(),
                                 flying_root(config)};
    for (auto& r : paper_trends(config)) out.push_back(std::move(r));
    return out;
}

}  // namespace hapdc::validation
