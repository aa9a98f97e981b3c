#pragma once

// Oracle suites shared by the acceptance binary and `hapdc validate`. Each
// check compares a model routine against an independent evaluation path.

#include <cstdint>
#include <string>
#include <vector>

#include "hapdc/config.hpp"

namespace hapdc::validation {

struct CheckResult {
    std::string id;      // "1", "8c", ...
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    int outage_draws = 100000;
    long long queue_tasks = 1000000;
    std::uint64_t seed = 20240101;
};

CheckResult special_functions();
CheckResult outage_sandwich(const Options& options);
CheckResult queueing_des(const Options& options);
CheckResult thermal_closed_form(const Options& options);
CheckResult propulsion_duality(const Options& options);
CheckResult solar_geometry();
CheckResult flying_root(const ModelConfig& config);

/// The qualitative trends 8a to 8f on `config`.
std::vector<CheckResult> paper_trends(const ModelConfig& config);

/// Every check above, in criterion order.
std::vector<CheckResult> run_all(const ModelConfig& config, const Options& options);

}  // namespace hapdc::validation
