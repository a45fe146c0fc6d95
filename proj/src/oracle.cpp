#include "colltest/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "colltest/moments.hpp"

namespace colltest {

namespace {

double pow_int(double base, std::int64_t e) {
    double r = 1.0;
    for (std::int64_t k = 0; k < e; ++k) r *= base;
    return r;
}

double sequence_space_size(std::int64_t n, std::int64_t m) {
    return std::pow(static_cast<double>(n), static_cast<double>(m));
}

double histogram_space_size(std::int64_t n, std::int64_t m) {
    // C(m + n - 1, n - 1)
    double r = 1.0;
    for (std::int64_t k = 1; k < n; ++k)
        r *= static_cast<double>(m + k) / static_cast<double>(k);
    return r;
}

EnumerationMethod resolve(EnumerationMethod method, std::int64_t n, std::int64_t m) {
    if (method != EnumerationMethod::Auto) return method;
    return sequence_space_size(n, m) <= 1e5 ? EnumerationMethod::Sequences
                                            : EnumerationMethod::Histograms;
}

// Accumulates sum of w and sum of w*f over all outcomes.
struct WeightedSum {
    double mass = 0.0;
    double value = 0.0;
};

template <typename F>
WeightedSum enumerate_sequences(const Distribution& p, std::int64_t m, const F& f) {
    const std::int64_t n = p.domain_size();
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(n), 0);
    h.m = m;
    WeightedSum out;
    // Odometer over sequences; counts maintained incrementally.
    std::vector<std::int64_t> seq(static_cast<std::size_t>(m), 0);
    h.counts[0] = m;
    double weight = pow_int(p.prob(0), m);
    for (;;) {
        out.mass += weight;
        out.value += weight * f(h);
        std::int64_t pos = 0;
        while (pos < m) {
            const std::int64_t cur = seq[static_cast<std::size_t>(pos)];
            --h.counts[static_cast<std::size_t>(cur)];
            if (cur + 1 < n) {
                seq[static_cast<std::size_t>(pos)] = cur + 1;
                ++h.counts[static_cast<std::size_t>(cur + 1)];
                break;
            }
            seq[static_cast<std::size_t>(pos)] = 0;
            ++h.counts[0];
            ++pos;
        }
        if (pos == m) break;
        // Recompute the weight from counts; m is tiny in enumeration regimes.
        weight = 1.0;
        for (std::int64_t i = 0; i < n; ++i)
            weight *= pow_int(p.prob(i), h.counts[static_cast<std::size_t>(i)]);
    }
    return out;
}

template <typename F>
void for_each_histogram(std::int64_t n, std::int64_t m, std::vector<std::int64_t>& counts,
                        std::int64_t index, std::int64_t remaining, const F& f) {
    if (index == n - 1) {
        counts[static_cast<std::size_t>(index)] = remaining;
        f(counts);
        return;
    }
    for (std::int64_t c = 0; c <= remaining; ++c) {
        counts[static_cast<std::size_t>(index)] = c;
        for_each_histogram(n, m, counts, index + 1, remaining - c, f);
    }
}

template <typename F>
WeightedSum enumerate_histograms(const Distribution& p, std::int64_t m, const F& f) {
    const std::int64_t n = p.domain_size();
    std::vector<double> log_fact(static_cast<std::size_t>(m + 1), 0.0);
    for (std::int64_t k = 2; k <= m; ++k)
        log_fact[static_cast<std::size_t>(k)] =
            log_fact[static_cast<std::size_t>(k - 1)] + std::log(static_cast<double>(k));

    WeightedSum out;
    Histogram h;
    h.m = m;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
    for_each_histogram(n, m, counts, 0, m, [&](const std::vector<std::int64_t>& cs) {
        // multinomial weight m!/(prod c_i!) prod p_i^{c_i}
        double log_coeff = log_fact[static_cast<std::size_t>(m)];
        double prob = 1.0;
        bool zero = false;
        for (std::int64_t i = 0; i < n; ++i) {
            const std::int64_t c = cs[static_cast<std::size_t>(i)];
            log_coeff -= log_fact[static_cast<std::size_t>(c)];
            if (c > 0) {
                const double pi = p.prob(i);
                if (pi == 0.0) { zero = true; break; }
                prob *= pow_int(pi, c);
            }
        }
        if (zero) return;
        const double w = std::exp(log_coeff) * prob;
        h.counts = cs;
        out.mass += w;
        out.value += w * f(h);
    });
    return out;
}

template <typename F>
WeightedSum enumerate_one(const Distribution& p, std::int64_t m, const F& f,
                          EnumerationMethod method, double budget) {
    if (m < 1) throw std::invalid_argument("enumeration: m must be >= 1");
    const std::int64_t n = p.domain_size();
    const EnumerationMethod resolved = resolve(method, n, m);
    const double cost = resolved == EnumerationMethod::Sequences ? sequence_space_size(n, m)
                                                                 : histogram_space_size(n, m);
    if (cost > budget) throw std::invalid_argument("enumeration: outcome space exceeds budget");
    WeightedSum out = resolved == EnumerationMethod::Sequences ? enumerate_sequences(p, m, f)
                                                               : enumerate_histograms(p, m, f);
    if (std::abs(out.mass - 1.0) > 1e-12)
        throw std::logic_error("enumeration: probabilities do not sum to 1");
    return out;
}

ExactMoments moments_from(double mean, double second) {
    ExactMoments em;
    em.mean = mean;
    em.second_moment = second;
    double var = second - mean * mean;
    if (var < 0.0) {
        if (var < -1e-9 * std::max(1.0, second))
            throw std::logic_error("enumeration: negative variance beyond roundoff");
        var = 0.0;
    }
    em.variance = var;
    return em;
}

}  // namespace

double enumerate_expectation(const Distribution& p, std::int64_t m,
                             const std::function<double(const Histogram&)>& f,
                             EnumerationMethod method, double budget) {
    return enumerate_one(p, m, f, method, budget).value;
}

double enumeration_probability_mass(const Distribution& p, std::int64_t m,
                                    EnumerationMethod method, double budget) {
    return enumerate_one(p, m, [](const Histogram&) { return 0.0; }, method, budget).mass;
}

double enumerate_pair_expectation(const Distribution& p, const Distribution& q, std::int64_t m,
                                  const std::function<double(const Histogram&, const Histogram&)>& f,
                                  EnumerationMethod method, double budget) {
    if (p.domain_size() != q.domain_size())
        throw std::invalid_argument("enumeration: domain size mismatch");
    // Outer enumeration over the p-histogram, inner over the q-histogram;
    // the budget applies to the product space.
    const std::int64_t n = p.domain_size();
    const EnumerationMethod resolved = resolve(method, n, 2 * m);
    const double one_side = resolved == EnumerationMethod::Sequences
                                ? sequence_space_size(n, m)
                                : histogram_space_size(n, m);
    if (one_side * one_side > budget)
        throw std::invalid_argument("enumeration: outcome space exceeds budget");
    auto outer = [&](const Histogram& hx) {
        WeightedSum inner = resolved == EnumerationMethod::Sequences
                                ? enumerate_sequences(q, m, [&](const Histogram& hy) { return f(hx, hy); })
                                : enumerate_histograms(q, m, [&](const Histogram& hy) { return f(hx, hy); });
        return inner.value;
    };
    WeightedSum out = resolved == EnumerationMethod::Sequences
                          ? enumerate_sequences(p, m, outer)
                          : enumerate_histograms(p, m, outer);
    if (std::abs(out.mass - 1.0) > 1e-12)
        throw std::logic_error("enumeration: probabilities do not sum to 1");
    return out.value;
}

ExactMoments enumerate_moments_s(const Distribution& p, std::int64_t m, EnumerationMethod method,
                                 double budget) {
    const double mean = enumerate_expectation(
        p, m, [](const Histogram& h) { return static_cast<double>(self_collisions(h)); }, method,
        budget);
    const double second = enumerate_expectation(
        p, m,
        [](const Histogram& h) {
            const double s = static_cast<double>(self_collisions(h));
            return s * s;
        },
        method, budget);
    return moments_from(mean, second);
}

ClosenessExactMoments enumerate_moments_closeness(const Distribution& p, const Distribution& q,
                                                  std::int64_t m, EnumerationMethod method,
                                                  double budget) {
    if (m < 2) throw std::invalid_argument("enumerate_moments_closeness: m must be >= 2");
    double ez = 0, ez2 = 0, ea = 0, ea2 = 0, eb = 0, eb2 = 0, eab = 0;
    auto accum = [&](const std::function<double(double, double, double)>& g) {
        return enumerate_pair_expectation(
            p, q, m,
            [&](const Histogram& hx, const Histogram& hy) {
                const double a = statistic_a(hx, hy);
                const double b = statistic_b(hx, hy);
                const double md = static_cast<double>(m);
                const double z = (md - 1.0) / (2.0 * md) * a + 1.0 / (2.0 * md) * b;
                return g(z, a, b);
            },
            method, budget);
    };
    ez = accum([](double z, double, double) { return z; });
    ez2 = accum([](double z, double, double) { return z * z; });
    ea = accum([](double, double a, double) { return a; });
    ea2 = accum([](double, double a, double) { return a * a; });
    eb = accum([](double, double, double b) { return b; });
    eb2 = accum([](double, double, double b) { return b * b; });
    eab = accum([](double, double a, double b) { return a * b; });

    ClosenessExactMoments out;
    out.z = moments_from(ez, ez2);
    out.a = moments_from(ea, ea2);
    out.b = moments_from(eb, eb2);
    out.cov_ab = eab - ea * eb;
    return out;
}

}  // namespace colltest
