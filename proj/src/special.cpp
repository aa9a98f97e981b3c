#include "hapdc/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "hapdc/error.hpp"

namespace hapdc::special {

namespace {

void check_args(int order, double x) {
    if (order < 0) throw NumericalError("bessel_i: order must be >= 0");
    if (!(x >= 0.0)) throw NumericalError("bessel_i: argument must be >= 0");
}

// log I_n(x) from the ascending series; accurate for x up to a few units.
double log_bessel_series(int n, double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(n + k));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return n * std::log(0.5 * x) - std::lgamma(n + 1.0) + std::log(sum);
}

// e^{-x} I_n(x) by Miller's backward recurrence, normalized with
// I_0(x) + 2 sum_k I_k(x) = e^x.
double scaled_by_recurrence(int n, double x) {
    const int start = 2 * (n + 20 + static_cast<int>(std::ceil(10.0 * std::sqrt(x))));
    const double two_over_x = 2.0 / x;
    double next = 0.0;  // I_{k+1}
    double cur = 1e-300;  // I_k
    double sum = 0.0;
    double result = 0.0;
    for (int k = start; k > 0; --k) {
        const double prev = k * two_over_x * cur + next;  // I_{k-1}
        next = cur;
        cur = prev;
        if (k - 1 == n) result = cur;
        if (k - 1 > 0) sum += 2.0 * cur;
        if (cur > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            sum *= 1e-250;
            result *= 1e-250;
        }
    }
    sum += cur;  // I_0
    return result / sum;
}

}  // namespace

double bessel_i_scaled(int order, double x) {
    check_args(order, x);
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    if (x < 1.0) return std::exp(log_bessel_series(order, x) - x);
    return scaled_by_recurrence(order, x);
}

double log_bessel_i(int order, double x) {
    check_args(order, x);
    if (x == 0.0) return order == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (x < 1.0) return log_bessel_series(order, x);
    return x + std::log(scaled_by_recurrence(order, x));
}

double bessel_i(int order, double x) {
    const double log_value = log_bessel_i(order, x);
    if (log_value > std::log(std::numeric_limits<double>::max())) {
        throw NumericalError("bessel_i: I_" + std::to_string(order) + "(" + std::to_string(x) +
                             ") overflows double precision");
    }
    return std::exp(log_value);
}

namespace {

// sum_k Pois(k; lambda) g(m + k, x), with g the regularized upper (upper=true)
// or lower incomplete gamma, summed outward from the Poisson mode.
double poisson_gamma_mixture(int m, double lambda, double x, bool upper) {
    auto gamma_term = [&](double s) {
        return upper ? boost::math::gamma_q(s, x) : boost::math::gamma_p(s, x);
    };
    auto log_weight = [&](double k) { return -lambda + k * std::log(lambda) - std::lgamma(k + 1.0); };

    const double mode = std::floor(lambda);
    constexpr int kMaxTerms = 200000;
    constexpr double kRelTol = 1e-17;

    double sum = 0.0;
    // Upward from the mode. Q(s, x) grows with s and P(s, x) shrinks.
    int terms = 0;
    for (double k = mode;; k += 1.0) {
        const double w = std::exp(log_weight(k));
        const double g = gamma_term(m + k);
        sum += w * g;
        const double ratio = lambda / (k + 2.0);
        const double tail_mass = ratio < 1.0 ? w * ratio / (1.0 - ratio) : w * 1e6;
        const double tail_bound = tail_mass * (upper ? 1.0 : g);
        if (tail_bound <= kRelTol * sum || tail_bound < 1e-300) break;
        if (++terms > kMaxTerms) {
            throw NumericalError("marcum_q: series did not converge (order " + std::to_string(m) +
                                 ", lambda " + std::to_string(lambda) + ", x " + std::to_string(x) + ")");
        }
    }
    // Downward from mode - 1.
    for (double k = mode - 1.0; k >= 0.0; k -= 1.0) {
        const double w = std::exp(log_weight(k));
        const double g = gamma_term(m + k);
        sum += w * g;
        const double ratio = k / lambda;
        const double tail_mass = ratio < 1.0 ? w * ratio / (1.0 - ratio) : w * (k + 1.0);
        const double tail_bound = tail_mass * (upper ? g : 1.0);
        if (tail_bound <= kRelTol * sum || tail_bound < 1e-300) break;
    }
    return sum;
}

void check_marcum(int order, double a, double y) {
    if (order < 1) throw NumericalError("marcum_q: order must be >= 1");
    if (!(a >= 0.0) || !(y >= 0.0)) throw NumericalError("marcum_q: arguments must be >= 0");
}

}  // namespace

double marcum_q(int order, double a, double y) {
    check_marcum(order, a, y);
    if (y == 0.0) return 1.0;
    const double x = 0.5 * y * y;
    if (a == 0.0) return boost::math::gamma_q(static_cast<double>(order), x);
    const double lambda = 0.5 * a * a;
    if (x > order + lambda) return std::min(1.0, poisson_gamma_mixture(order, lambda, x, true));
    return std::clamp(1.0 - poisson_gamma_mixture(order, lambda, x, false), 0.0, 1.0);
}

double marcum_p(int order, double a, double y) {
    check_marcum(order, a, y);
    if (y == 0.0) return 0.0;
    const double x = 0.5 * y * y;
    if (a == 0.0) return boost::math::gamma_p(static_cast<double>(order), x);
    const double lambda = 0.5 * a * a;
    if (x > order + lambda) return std::clamp(1.0 - poisson_gamma_mixture(order, lambda, x, true), 0.0, 1.0);
    return std::min(1.0, poisson_gamma_mixture(order, lambda, x, false));
}

}  // namespace hapdc::special
