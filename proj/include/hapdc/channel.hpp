#pragma once

// Rician MIMO link between the terrestrial data center and the HAP: channel
// sampling, achievable rate, transmission energy, and CCDF outage bounds
// built on the trace of the channel Gram matrix.

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hapdc/config.hpp"

namespace hapdc::channel {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kSpeedOfLight = 299792458.0;

struct RicianLink {
    CMatrix los;                  // M x N, unit-modulus entries
    double path_gain = 0.0;       // Psi0 / L^2
    double rician_factor = 0.0;   // zeta
    double noise_power = 0.0;     // sigma^2, W
    double bandwidth_hz = 0.0;
    CMatrix input_covariance;     // N x N, trace = tx_power (q q^H for a rank-1 precoder)
    std::optional<CVector> precoder;  // set for rank-1 precoding

    int rx() const { return static_cast<int>(los.rows()); }
    int tx() const { return static_cast<int>(los.cols()); }
};

/// Co-phased LoS matrix exp(-j 2 pi f r / c) for every antenna pair.
CMatrix los_matrix(int rx, int tx, double carrier_hz, double path_length);

RicianLink make_link(const ChannelConfig& config);

/// Deterministic generator for channel draws; one instance per worker.
class ChannelSampler {
public:
    ChannelSampler(const RicianLink& link, std::uint64_t seed);
    CMatrix sample();

private:
    const RicianLink* link_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// One draw of H = sqrt(g) (sqrt(zeta/(zeta+1)) H_los + sqrt(1/(zeta+1)) H_scatter).
CMatrix sample_channel(const RicianLink& link, std::uint64_t seed);

/// B log2 det(I_M + H Q H^H / sigma^2), evaluated on the smaller N x N side.
double rate(const RicianLink& link, const CMatrix& h);

/// The same quantity from the full M x M determinant.
double rate_det_form(const RicianLink& link, const CMatrix& h);

/// B log2(1 + ||H q||^2 / sigma^2); requires a rank-1 precoder.
double rate_rank_one(const RicianLink& link, const CMatrix& h);

/// Mean rate over `samples` draws seeded with `seed`.
double ergodic_rate(const RicianLink& link, int samples, std::uint64_t seed);

/// A link with its ergodic rate precomputed (the R_HAP used by energy and delay).
struct LinkBudget {
    ChannelConfig config;
    RicianLink link;
    double ergodic_rate_bps = 0.0;
};

LinkBudget make_link_budget(const ChannelConfig& config);

/// sum_i lambda_i theta* b*, bits/s.
double offered_bits(std::span<const double> hap_rates, const WorkloadSpec& workload);

/// beta b / R; above 1 the link is saturated.
double duty_cycle(std::span<const double> hap_rates, const WorkloadSpec& workload, double rate_bps);

/// (beta b / R) ||q||^2 (t2 - t1). Throws LinkError for a non-positive rate.
double transmission_energy(std::span<const double> hap_rates, const WorkloadSpec& workload,
                           const LinkBudget& budget, const Window& window);

/// Spectral demand (bits/s/Hz) of a total offloaded rate in tasks/s.
double spectral_demand(double total_rate, const WorkloadSpec& workload, const ChannelConfig& config);

/// Inverse of spectral_demand.
double rate_for_demand(double demand, const WorkloadSpec& workload, const ChannelConfig& config);

/// Non-centrality zeta ||H_los||_F^2 and a = (1 + zeta) / eta'.
double noncentrality(const ChannelConfig& config);
double trace_scale(const ChannelConfig& config);

/// CCDF bounds of the spectral efficiency R/B at a demand in bits/s/Hz.
double ccdf_lower(double demand, const ChannelConfig& config);
double ccdf_upper(double demand, const ChannelConfig& config);

struct OutageCurve {
    std::vector<double> lambdas;         // tasks/s (total offloaded)
    std::vector<double> demands;         // bits/s/Hz
    std::vector<double> ccdf_lower;
    std::vector<double> ccdf_upper;
    std::vector<double> ccdf_empirical;  // empty unless sampled
    std::vector<double> empirical_se;
    std::vector<double> drop_rate;       // 1 - ccdf_lower
};

OutageCurve outage_bounds(std::span<const double> lambdas, const ChannelConfig& config, const WorkloadSpec& workload);

/// Bounds plus the Monte Carlo Pr(R/B > demand) with binomial standard errors.
/// Samples are split over a fixed number of chunks with derived seeds, so the
/// result does not depend on the worker count.
OutageCurve empirical_ccdf(std::span<const double> lambdas, const ChannelConfig& config,
                           const WorkloadSpec& workload, int samples, std::uint64_t seed);

/// Pr_drop(lambda) = 1 - lower-bound CCDF.
double drop_probability(double total_rate, const ChannelConfig& config, const WorkloadSpec& workload);

/// Largest total rate whose lower-bound CCDF stays >= 1 - 1e-12.
double drop_free_rate(const ChannelConfig& config, const WorkloadSpec& workload);

/// Seed of chunk `index` derived from a run seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace hapdc::channel
