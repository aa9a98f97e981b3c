#include <doctest.h>

#include <cmath>
#include <vector>

#include "hapdc/error.hpp"
#include "hapdc/queueing.hpp"

using namespace hapdc;
using queueing::QueueParams;

TEST_CASE("residual time") {
    const auto idle = QueueParams::exponential(0.0, 1.0, 2.0);
    CHECK(queueing::residual_time(idle) == doctest::Approx(idle.vacation_second / (2.0 * idle.vacation_mean)));
    CHECK(queueing::residual_time(QueueParams::exponential(0.5, 1.0, 1.0)) == doctest::Approx(1.0));
    QueueParams fixed{0.0, 1.0, 1.0, 3.0, 9.0};
    CHECK(queueing::residual_time(fixed) == doctest::Approx(1.5));
}

TEST_CASE("mean wait") {
    CHECK(queueing::mean_wait(QueueParams::exponential(0.5, 1.0, 1.0)) == doctest::Approx(2.0));
    CHECK(queueing::mean_wait(QueueParams::exponential(1e-12, 4000.0, 2.0)) == doctest::Approx(0.5));
    for (double lambda : {0.1, 0.3, 0.7, 0.95}) {
        const double want = lambda / (1.0 - lambda) + 1.0 / 3.0;
        CHECK(queueing::mean_wait(QueueParams::exponential(lambda, 1.0, 3.0)) == doctest::Approx(want).epsilon(1e-14));
    }
    CHECK_THROWS_AS(queueing::mean_wait(QueueParams::exponential(1.0, 1.0, 1.0)), InstabilityError);
    CHECK_THROWS_AS(queueing::residual_time(QueueParams::exponential(2.0, 1.0, 1.0)), InstabilityError);
}

TEST_CASE("mean wait is convex and increasing") {
    std::vector<double> w;
    for (int i = 0; i < 99; ++i) w.push_back(queueing::mean_wait(QueueParams::exponential(i / 100.0, 1.0, 1.0)));
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] > w[i - 1]);
    for (std::size_t i = 1; i + 1 < w.size(); ++i) CHECK(w[i + 1] - 2.0 * w[i] + w[i - 1] >= -1e-12);
}

TEST_CASE("simulation matches the closed form") {
    const auto sim = queueing::simulate_mm1_vacations(1.0, 1.0, 0.5, 1000000, 42);
    CHECK(sim.tasks >= 900000);
    CHECK(std::abs(sim.mean_wait_s - 2.0) <= 3.0 * sim.stderr_s);
    // Little's law on the waiting room, with queue lengths sampled at arrivals.
    CHECK(std::abs(sim.mean_queue_length - 0.5 * sim.mean_wait_s) <=
          3.0 * std::hypot(sim.queue_length_stderr, 0.5 * sim.stderr_s));
}

TEST_CASE("vanishing vacations give the classic M/M/1 wait") {
    const double lambda = 0.6;
    const auto sim = queueing::simulate_mm1_vacations(1.0, 1e9, lambda, 400000, 7);
    const double want = lambda / (1.0 * (1.0 - lambda));
    CHECK(std::abs(sim.mean_wait_s - want) <= 3.0 * sim.stderr_s);
}

TEST_CASE("simulation is deterministic and validates input") {
    const auto a = queueing::simulate_mm1_vacations(1.0, 2.0, 0.3, 20000, 5);
    const auto b = queueing::simulate_mm1_vacations(1.0, 2.0, 0.3, 20000, 5);
    CHECK(a.mean_wait_s == b.mean_wait_s);
    CHECK(a.stderr_s == b.stderr_s);
    CHECK_THROWS_AS(queueing::simulate_mm1_vacations(1.0, 2.0, 0.3, 100, 5), ValidationError);
    CHECK_THROWS_AS(queueing::simulate_mm1_vacations(1.0, 2.0, 1.0, 20000, 5), InstabilityError);
}

TEST_CASE("round-trip time") {
    WorkloadSpec w;
    std::vector<double> zeros(3, 0.0);
    CHECK(queueing::rtt(zeros, w, 1e8) == 0.0);
    const double r = 1e8;
    std::vector<double> unit{r / (w.task_length_instr * w.bits_per_instruction)};
    CHECK(queueing::rtt(unit, w, r) == doctest::Approx(2.0));
    std::vector<double> two{100.0, 300.0};
    CHECK(queueing::rtt(two, w, 5e7) == doctest::Approx(2.0 * 400.0 * 1e6 * 4e-3 / 5e7));
    CHECK_THROWS_AS(queueing::rtt(two, w, 0.0), LinkError);
}

TEST_CASE("delay comparison") {
    QueueSpec q;
    WorkloadSpec small;
    WorkloadSpec large;
    large.task_length_instr = WorkloadSpec::kLargeTaskLength;
    std::vector<double> rates;
    for (int i = 0; i < 100; ++i) rates.push_back(0.99 * q.service_rate * i / 99.0);
    rates.push_back(q.service_rate);

    const auto s = queueing::delay_comparison(rates, q, small, 1.031e8);
    CHECK(s.size() == 100);
    CHECK(s.front().report.mean_wait_s == doctest::Approx(1.0 / q.vacation_rate));
    CHECK(s.front().report.rtt_s == 0.0);
    for (const auto& row : s) CHECK_FALSE(row.rtt_dominates);

    const auto l = queueing::delay_comparison(rates, q, large, 1.031e8);
    bool band = false;
    for (const auto& row : l) band = band || row.rtt_dominates;
    CHECK(band);
    CHECK_FALSE(l.front().rtt_dominates);
}
