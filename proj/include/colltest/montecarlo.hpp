#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "colltest/distribution.hpp"
#include "colltest/testers.hpp"

namespace colltest {

// Wilson score interval for a binomial proportion; well-behaved at observed
// rates of 0 or 1. Default z is the 99% two-sided normal quantile.
constexpr double kWilson99Z = 2.5758293035489004;
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials,
                                          double z = kWilson99Z);

struct ErrorRateEstimate {
    std::int64_t trials = 0;
    std::int64_t failures = 0;
    double point = 0.0;
    double lo = 0.0;
    double hi = 1.0;
    std::uint64_t base_seed = 0;
};

// Which side of the promise the scenario's family sits on; determines what
// counts as a failure (completeness: NO is wrong; soundness: YES is wrong).
enum class Side { Completeness, Soundness };

struct UniformityScenario {
    Distribution p;
    Side side;
    std::int64_t n;
    double eps;
    std::int64_t m;
    std::string id;
};

struct ClosenessScenario {
    Distribution p;
    Distribution q;
    Side side;
    double eps;
    std::int64_t m;
    // l2^2-norm promise; when present and enforce_promise is set, the
    // scenario is rejected unless b >= max(||p||_2^2, ||q||_2^2).
    std::optional<double> b;
    bool enforce_promise = true;
    std::string id;
};

// Runs `trials` independent seeded trials (seed = derive_seed(base_seed, t)),
// sampling fresh data per trial and counting wrong verdicts. Deterministic
// given (scenario, trials, base_seed); trials execute in parallel.
ErrorRateEstimate estimate_error_rate(const UniformityScenario& scenario, std::int64_t trials,
                                      std::uint64_t base_seed, int threads = 0);
ErrorRateEstimate estimate_error_rate(const ClosenessScenario& scenario, std::int64_t trials,
                                      std::uint64_t base_seed, int threads = 0);

}  // namespace colltest
