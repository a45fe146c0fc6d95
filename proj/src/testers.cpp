#include "colltest/testers.hpp"

#include <cmath>
#include <stdexcept>

namespace colltest {

namespace {

void check_eps(double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must be in (0, 1]");
}

double choose2(std::int64_t m) {
    return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
}

}  // namespace

std::int64_t required_samples_uniformity(std::int64_t n, double eps, double constant) {
    check_eps(eps);
    if (n < 2) throw std::invalid_argument("required_samples_uniformity: n must be >= 2");
    if (!(constant > 0.0)) throw std::invalid_argument("constant must be positive");
    const double m = constant * std::sqrt(static_cast<double>(n)) / (eps * eps);
    return static_cast<std::int64_t>(std::ceil(m));
}

double uniformity_threshold(std::int64_t m, std::int64_t n, double eps) {
    if (m < 2) throw std::invalid_argument("uniformity_threshold: m must be >= 2");
    return choose2(m) * (1.0 + 0.75 * eps * eps) / static_cast<double>(n);
}

Verdict test_uniformity(const Histogram& h, std::int64_t n, double eps) {
    check_eps(eps);
    if (h.m < 2) throw std::invalid_argument("test_uniformity: m must be >= 2");
    if (h.domain_size() != n) throw std::invalid_argument("test_uniformity: domain mismatch");
    Verdict v;
    v.statistic = static_cast<double>(self_collisions(h));
    v.threshold = uniformity_threshold(h.m, n, eps);
    v.decision_no = v.statistic >= v.threshold;
    v.m = h.m;
    v.n = n;
    v.epsilon = eps;
    return v;
}

std::int64_t required_samples_closeness(double b, double eps, double constant) {
    check_eps(eps);
    if (!(b > 0.0 && b <= 1.0))
        throw std::invalid_argument("required_samples_closeness: b must be in (0, 1]");
    if (!(constant > 0.0)) throw std::invalid_argument("constant must be positive");
    const double m = constant * std::sqrt(b) / (eps * eps);
    return static_cast<std::int64_t>(std::ceil(m));
}

double closeness_threshold(std::int64_t m, double eps) {
    if (m < 2) throw std::invalid_argument("closeness_threshold: m must be >= 2");
    return choose2(m) * eps * eps / 2.0;
}

Verdict test_closeness(const Histogram& hp, const Histogram& hq, double eps) {
    check_eps(eps);
    if (hp.m != hq.m) throw std::invalid_argument("test_closeness: sample count mismatch");
    if (hp.domain_size() != hq.domain_size())
        throw std::invalid_argument("test_closeness: domain mismatch");
    if (hp.m < 2) throw std::invalid_argument("test_closeness: m must be >= 2");
    Verdict v;
    v.statistic = closeness_statistic(hp, hq);
    v.threshold = closeness_threshold(hp.m, eps);
    v.decision_no = v.statistic >= v.threshold;
    v.m = hp.m;
    v.n = hp.domain_size();
    v.epsilon = eps;
    return v;
}

double chi_squared_statistic(const Histogram& h, std::int64_t n) {
    if (h.m < 1) throw std::invalid_argument("chi_squared_statistic: m must be >= 1");
    if (h.domain_size() != n)
        throw std::invalid_argument("chi_squared_statistic: domain mismatch");
    const double expected = static_cast<double>(h.m) / static_cast<double>(n);
    double total = 0.0;
    for (std::int64_t x : h.counts) {
        const double d = static_cast<double>(x) - expected;
        total += d * d - static_cast<double>(x);
    }
    return total;
}

double poissonized_collision_trial(const AliasTable& table, double rate, std::uint64_t seed) {
    if (!(rate > 0.0)) throw std::invalid_argument("poissonized trial: rate must be positive");
    Rng rng = make_rng(seed);
    std::poisson_distribution<std::int64_t> poi(rate);
    const std::int64_t draws = poi(rng);
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(table.domain_size()), 0);
    h.m = draws;
    for (std::int64_t k = 0; k < draws; ++k)
        ++h.counts[static_cast<std::size_t>(table.draw(rng))];
    return static_cast<double>(self_collisions(h));
}

double poissonized_collision_trial(const Distribution& p, double rate, std::uint64_t seed) {
    return poissonized_collision_trial(AliasTable(p), rate, seed);
}

}  // namespace colltest
