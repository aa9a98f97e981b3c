#include "hapdc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hapdc/error.hpp"
#include "hapdc/parallel.hpp"
#include "hapdc/special.hpp"

namespace hapdc::channel {

namespace {

constexpr std::size_t kChunks = 16;

double log2_det_hermitian(const CMatrix& a) {
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success) throw NumericalError("rate: matrix is not positive definite");
    const auto& l = llt.matrixLLT();
    double s = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log2(l(i, i).real());
    return 2.0 * s;
}

// Sizes of the fixed sample chunks.
std::vector<int> chunk_sizes(int samples) {
    std::vector<int> sizes(kChunks, samples / static_cast<int>(kChunks));
    for (int i = 0; i < samples % static_cast<int>(kChunks); ++i) ++sizes[static_cast<std::size_t>(i)];
    return sizes;
}

// Spectral efficiencies (bits/s/Hz) of `samples` draws, in chunk order.
std::vector<double> sample_efficiencies(const RicianLink& link, int samples, std::uint64_t seed) {
    const auto sizes = chunk_sizes(samples);
    std::vector<std::vector<double>> parts(kChunks);
    parallel_for(kChunks, [&](std::size_t c) {
        ChannelSampler sampler(link, derive_seed(seed, c));
        auto& out = parts[c];
        out.reserve(static_cast<std::size_t>(sizes[c]));
        for (int i = 0; i < sizes[c]; ++i) out.push_back(rate(link, sampler.sample()) / link.bandwidth_hz);
    });
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(samples));
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CMatrix los_matrix(int rx, int tx, double carrier_hz, double path_length) {
    const double phase = -2.0 * std::numbers::pi * carrier_hz * path_length / kSpeedOfLight;
    return CMatrix::Constant(rx, tx, std::polar(1.0, std::fmod(phase, 2.0 * std::numbers::pi)));
}

RicianLink make_link(const ChannelConfig& c) {
    RicianLink link;
    link.los = los_matrix(c.rx_antennas, c.tx_antennas, c.carrier_hz, c.link_distance);
    link.path_gain = c.path_gain();
    link.rician_factor = c.rician_factor;
    link.noise_power = c.noise_power_w();
    link.bandwidth_hz = c.bandwidth_hz;
    const int n = c.tx_antennas;
    if (c.precoding == Precoding::Isotropic) {
        link.input_covariance = CMatrix::Identity(n, n) * (c.tx_power / n);
    } else {
        // Maximum-ratio transmission toward the dominant right singular vector of the LoS matrix.
        Eigen::JacobiSVD<CMatrix> svd(link.los, Eigen::ComputeThinV);
        CVector q = svd.matrixV().col(0) * std::sqrt(c.tx_power);
        link.input_covariance = q * q.adjoint();
        link.precoder = q;
    }
    return link;
}

ChannelSampler::ChannelSampler(const RicianLink& link, std::uint64_t seed) : link_(&link), engine_(seed) {}

CMatrix ChannelSampler::sample() {
    const double zeta = link_->rician_factor;
    const double los_weight = std::sqrt(zeta / (zeta + 1.0));
    const double scatter_weight = std::sqrt(1.0 / (zeta + 1.0));
    const double half = std::sqrt(0.5);
    CMatrix h(link_->rx(), link_->tx());
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            const std::complex<double> scatter(half * normal_(engine_), half * normal_(engine_));
            h(i, j) = los_weight * link_->los(i, j) + scatter_weight * scatter;
        }
    }
    return h * std::sqrt(link_->path_gain);
}

CMatrix sample_channel(const RicianLink& link, std::uint64_t seed) {
    ChannelSampler sampler(link, seed);
    return sampler.sample();
}

double rate(const RicianLink& link, const CMatrix& h) {
    const Eigen::Index n = h.cols();
    // Sylvester: det(I_M + H Q H^H / s) = det(I_N + Q H^H H / s).
    const CMatrix gram = h.adjoint() * h / link.noise_power;
    const CMatrix a = CMatrix::Identity(n, n) + link.input_covariance * gram;
    const double det = a.partialPivLu().determinant().real();
    return link.bandwidth_hz * std::log2(std::max(det, 1.0));
}

double rate_det_form(const RicianLink& link, const CMatrix& h) {
    const Eigen::Index m = h.rows();
    const CMatrix a = CMatrix::Identity(m, m) + h * link.input_covariance * h.adjoint() / link.noise_power;
    return link.bandwidth_hz * log2_det_hermitian(a);
}

double rate_rank_one(const RicianLink& link, const CMatrix& h) {
    if (!link.precoder) throw ValidationError("rate_rank_one: link has no rank-1 precoder");
    return link.bandwidth_hz * std::log2(1.0 + (h * *link.precoder).squaredNorm() / link.noise_power);
}

double ergodic_rate(const RicianLink& link, int samples, std::uint64_t seed) {
    if (samples < 1) throw ValidationError("ergodic_rate: at least one sample is required");
    const auto eff = sample_efficiencies(link, samples, seed);
    return link.bandwidth_hz * std::accumulate(eff.begin(), eff.end(), 0.0) / samples;
}

LinkBudget make_link_budget(const ChannelConfig& config) {
    LinkBudget b{config, make_link(config), 0.0};
    b.ergodic_rate_bps = ergodic_rate(b.link, config.rate_samples, config.rate_seed);
    return b;
}

double offered_bits(std::span<const double> hap_rates, const WorkloadSpec& w) {
    const double total = std::accumulate(hap_rates.begin(), hap_rates.end(), 0.0);
    return total * w.task_length_instr * w.bits_per_instruction;
}

double duty_cycle(std::span<const double> hap_rates, const WorkloadSpec& w, double rate_bps) {
    if (!(rate_bps > 0.0)) throw LinkError("link rate must be positive");
    return w.overhead_ratio * offered_bits(hap_rates, w) / rate_bps;
}

double transmission_energy(std::span<const double> hap_rates, const WorkloadSpec& w, const LinkBudget& budget,
                           const Window& window) {
    return duty_cycle(hap_rates, w, budget.ergodic_rate_bps) * budget.config.tx_power * window.length();
}

double spectral_demand(double total_rate, const WorkloadSpec& w, const ChannelConfig& c) {
    if (c.demand_mapping == DemandMapping::Identity) return total_rate;
    return total_rate * w.task_length_instr * w.bits_per_instruction / c.bandwidth_hz;
}

double rate_for_demand(double demand, const WorkloadSpec& w, const ChannelConfig& c) {
    if (c.demand_mapping == DemandMapping::Identity) return demand;
    return demand * c.bandwidth_hz / (w.task_length_instr * w.bits_per_instruction);
}

double noncentrality(const ChannelConfig& c) {
    return c.rician_factor * static_cast<double>(c.rx_antennas) * static_cast<double>(c.tx_antennas);
}

double trace_scale(const ChannelConfig& c) { return (1.0 + c.rician_factor) / c.rx_snr(); }

double ccdf_lower(double demand, const ChannelConfig& c) {
    if (demand <= 0.0) return 1.0;
    const int order = c.rx_antennas * c.tx_antennas;
    const double a = trace_scale(c);
    return special::marcum_q(order, std::sqrt(2.0 * noncentrality(c)), std::sqrt(2.0 * a * std::expm1(demand * std::numbers::ln2)));
}

double ccdf_upper(double demand, const ChannelConfig& c) {
    if (demand <= 0.0) return 1.0;
    const int order = c.rx_antennas * c.tx_antennas;
    const double n = c.tx_antennas;
    const double a = trace_scale(c);
    const double y2 = 2.0 * a * n * std::expm1(demand / n * std::numbers::ln2);
    return special::marcum_q(order, std::sqrt(2.0 * noncentrality(c)), std::sqrt(y2));
}

OutageCurve outage_bounds(std::span<const double> lambdas, const ChannelConfig& c, const WorkloadSpec& w) {
    OutageCurve curve;
    curve.lambdas.assign(lambdas.begin(), lambdas.end());
    for (double lambda : lambdas) {
        const double s = spectral_demand(lambda, w, c);
        curve.demands.push_back(s);
        const double lb = ccdf_lower(s, c);
        curve.ccdf_lower.push_back(lb);
        curve.ccdf_upper.push_back(ccdf_upper(s, c));
        curve.drop_rate.push_back(1.0 - lb);
    }
    return curve;
}

OutageCurve empirical_ccdf(std::span<const double> lambdas, const ChannelConfig& c, const WorkloadSpec& w,
                           int samples, std::uint64_t seed) {
    if (samples < 1) throw ValidationError("empirical_ccdf: at least one sample is required");
    OutageCurve curve = outage_bounds(lambdas, c, w);
    const RicianLink link = make_link(c);
    auto eff = sample_efficiencies(link, samples, seed);
    std::sort(eff.begin(), eff.end());
    const double n = samples;
    for (double s : curve.demands) {
        const auto above = eff.end() - std::upper_bound(eff.begin(), eff.end(), s);
        const double k = static_cast<double>(above);
        curve.ccdf_empirical.push_back(k / n);
        // Add-one estimate keeps the error bar positive when k is 0 or n.
        const double p = (k + 1.0) / (n + 2.0);
        curve.empirical_se.push_back(std::sqrt(p * (1.0 - p) / n));
    }
    return curve;
}

double drop_probability(double total_rate, const ChannelConfig& c, const WorkloadSpec& w) {
    const double s = spectral_demand(total_rate, w, c);
    if (s <= 0.0) return 0.0;
    const int order = c.rx_antennas * c.tx_antennas;
    const double a = trace_scale(c);
    return special::marcum_p(order, std::sqrt(2.0 * noncentrality(c)), std::sqrt(2.0 * a * std::expm1(s * std::numbers::ln2)));
}

double drop_free_rate(const ChannelConfig& c, const WorkloadSpec& w) {
    constexpr double kTolerance = 1e-12;
    const int order = c.rx_antennas * c.tx_antennas;
    const double a = trace_scale(c);
    const double root = std::sqrt(2.0 * noncentrality(c));
    auto drop_at = [&](double s) { return special::marcum_p(order, root, std::sqrt(2.0 * a * std::expm1(s * std::numbers::ln2))); };
    double lo = 0.0;
    double hi = 1.0;
    while (drop_at(hi) <= kTolerance) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e4) throw NumericalError("drop_free_rate: no outage onset below 1e4 bits/s/Hz");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (drop_at(mid) <= kTolerance ? lo : hi) = mid;
    }
    return rate_for_demand(lo, w, c);
}

}  // namespace hapdc::channel
