#pragma once

#include <cstdint>
#include <optional>

#include "colltest/distribution.hpp"
#include "colltest/moments.hpp"

namespace colltest {

constexpr double kUniformityConstant = 3200.0;  // m >= 3200 sqrt(n)/eps^2
constexpr double kClosenessConstant = 32768.0;  // m >= 32768 sqrt(b)/eps^2

// Decision plus the evidence behind it. `decision_no` is true iff
// statistic >= threshold (rejection on equality).
struct Verdict {
    bool decision_no = false;
    double statistic = 0.0;
    double threshold = 0.0;
    std::int64_t m = 0;
    std::int64_t n = 0;
    double epsilon = 0.0;
    std::optional<std::uint64_t> seed;  // absent when histograms came from outside

    bool yes() const { return !decision_no; }
};

// ceil(c sqrt(n)/eps^2); the sample size guaranteeing error <= 1/4 for the
// uniformity tester at the default constant.
std::int64_t required_samples_uniformity(std::int64_t n, double eps,
                                         double constant = kUniformityConstant);

// t = C(m,2) (1 + 3 eps^2/4)/n.
double uniformity_threshold(std::int64_t m, std::int64_t n, double eps);

// Collision uniformity tester: NO iff self_collisions(h) >= threshold.
// Distinguishes ||p-U_n||_2^2 <= eps^2/(2n) from >= eps^2/n with probability
// >= 3/4 once m >= required_samples_uniformity(n, eps).
Verdict test_uniformity(const Histogram& h, std::int64_t n, double eps);

// ceil(c sqrt(b)/eps^2). The default c = 32768 is derived from the error
// bound 32768 b/(m^2 eps^4) + 4096 sqrt(b)/(m eps^2): with b <= 1 and
// m >= 32768 sqrt(b)/eps^2 the two terms total at most 1/32 + 1/8 < 1/4.
std::int64_t required_samples_closeness(double b, double eps,
                                        double constant = kClosenessConstant);

// t = C(m,2) eps^2/2.
double closeness_threshold(std::int64_t m, double eps);

// Collision closeness tester: NO iff Z >= threshold. Distinguishes
// ||p-q||_2 <= eps/2 from >= eps with probability >= 3/4 once
// m >= required_samples_closeness(b, eps) with b >= max(||p||_2^2, ||q||_2^2).
Verdict test_closeness(const Histogram& hp, const Histogram& hq, double eps);

// Baseline statistic sum_i (X_i - m/n)^2 - X_i. For fixed m it satisfies
// chi2 = 2 s - m^2/n where s is the collision count (note the factor 2 on
// the collision term; the identity is verified in the test suite).
double chi_squared_statistic(const Histogram& h, std::int64_t n);

// Draw M ~ Poisson(rate), then M iid samples from p, and return the
// self-collision count. Deterministic given the seed.
double poissonized_collision_trial(const Distribution& p, double rate, std::uint64_t seed);
double poissonized_collision_trial(const AliasTable& table, double rate, std::uint64_t seed);

}  // namespace colltest
