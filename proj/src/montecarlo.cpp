#include "colltest/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace colltest {

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be positive");
    if (successes < 0 || successes > trials)
        throw std::invalid_argument("wilson_interval: successes out of range");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    double lo = center - half, hi = center + half;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

namespace {

// Runs `trials` deterministic trials in parallel and counts failures.
// Aggregation is a commutative count, so chunk order does not matter.
template <typename TrialFn>
std::int64_t count_failures(std::int64_t trials, int threads, const TrialFn& fails) {
    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    if (trials < 4 * nthreads) nthreads = 1;

    std::atomic<std::int64_t> failures{0};
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        constexpr std::int64_t kChunk = 16;
        std::int64_t local = 0;
        for (;;) {
            const std::int64_t start = next.fetch_add(kChunk);
            if (start >= trials) break;
            const std::int64_t end = std::min(trials, start + kChunk);
            for (std::int64_t t = start; t < end; ++t)
                if (fails(t)) ++local;
        }
        failures.fetch_add(local);
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return failures.load();
}

ErrorRateEstimate finish(std::int64_t trials, std::int64_t failures, std::uint64_t base_seed) {
    ErrorRateEstimate est;
    est.trials = trials;
    est.failures = failures;
    est.point = static_cast<double>(failures) / static_cast<double>(trials);
    auto [lo, hi] = wilson_interval(failures, trials);
    est.lo = lo;
    est.hi = hi;
    est.base_seed = base_seed;
    return est;
}

void check_trials(std::int64_t trials) {
    if (trials < 100) throw std::invalid_argument("estimate_error_rate: trials must be >= 100");
}

}  // namespace

ErrorRateEstimate estimate_error_rate(const UniformityScenario& scenario, std::int64_t trials,
                                      std::uint64_t base_seed, int threads) {
    check_trials(trials);
    if (scenario.p.domain_size() != scenario.n)
        throw std::invalid_argument("uniformity scenario: domain mismatch");
    if (scenario.m < 2) throw std::invalid_argument("uniformity scenario: m must be >= 2");
    // The declared side must actually hold for the family.
    const Distribution u = uniform_distribution(scenario.n);
    const double d2 = l2_distance_squared(scenario.p, u);
    const double e2n = scenario.eps * scenario.eps / static_cast<double>(scenario.n);
    if (scenario.side == Side::Completeness && d2 > 0.5 * e2n + 1e-12)
        throw std::invalid_argument("uniformity scenario: family is not in the completeness case");
    if (scenario.side == Side::Soundness && d2 < e2n - 1e-12)
        throw std::invalid_argument("uniformity scenario: family is not eps-far");

    const AliasTable table(scenario.p);
    const bool fail_on_no = scenario.side == Side::Completeness;
    const std::int64_t failures = count_failures(trials, threads, [&](std::int64_t t) {
        const Histogram h = sample_histogram(table, scenario.m, derive_seed(base_seed, t));
        const Verdict v = test_uniformity(h, scenario.n, scenario.eps);
        return fail_on_no ? v.decision_no : !v.decision_no;
    });
    return finish(trials, failures, base_seed);
}

ErrorRateEstimate estimate_error_rate(const ClosenessScenario& scenario, std::int64_t trials,
                                      std::uint64_t base_seed, int threads) {
    check_trials(trials);
    if (scenario.p.domain_size() != scenario.q.domain_size())
        throw std::invalid_argument("closeness scenario: domain mismatch");
    if (scenario.m < 2) throw std::invalid_argument("closeness scenario: m must be >= 2");
    const double dist = std::sqrt(l2_distance_squared(scenario.p, scenario.q));
    if (scenario.side == Side::Completeness && dist > 0.5 * scenario.eps + 1e-12)
        throw std::invalid_argument("closeness scenario: pair is not in the completeness case");
    if (scenario.side == Side::Soundness && dist < scenario.eps - 1e-12)
        throw std::invalid_argument("closeness scenario: pair is not eps-far");
    if (scenario.b && scenario.enforce_promise) {
        const double b_min =
            std::max(scenario.p.l2_norm_squared(), scenario.q.l2_norm_squared());
        if (*scenario.b < b_min - 1e-12)
            throw std::invalid_argument("closeness scenario: b below max(||p||_2^2, ||q||_2^2)");
    }

    const AliasTable tp(scenario.p), tq(scenario.q);
    const bool fail_on_no = scenario.side == Side::Completeness;
    const std::int64_t failures = count_failures(trials, threads, [&](std::int64_t t) {
        const Histogram hp = sample_histogram(tp, scenario.m, derive_seed(base_seed, 2 * t));
        const Histogram hq = sample_histogram(tq, scenario.m, derive_seed(base_seed, 2 * t + 1));
        const Verdict v = test_closeness(hp, hq, scenario.eps);
        return fail_on_no ? v.decision_no : !v.decision_no;
    });
    return finish(trials, failures, base_seed);
}

}  // namespace colltest
