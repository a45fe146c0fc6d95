#include "colltest/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace colltest {

namespace {

// Compensated (Kahan) summation; the moment formulas difference large,
// nearly-equal power sums, so the inputs must be as exact as possible.
double kahan_sum(const std::vector<double>& xs) {
    double sum = 0.0, c = 0.0;
    for (double x : xs) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace

Distribution::Distribution(std::vector<double> weights) {
    if (weights.empty()) throw std::invalid_argument("Distribution: empty weight vector");
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("Distribution: negative or NaN weight");
    }
    const double total = kahan_sum(weights);
    if (total <= 0.0) throw std::invalid_argument("Distribution: all weights are zero");
    if (std::abs(total - 1.0) > 1e-12) {
        for (double& w : weights) w /= total;
    }
    probs_ = std::move(weights);
    sum2_ = power_sum(2);
}

double Distribution::power_sum(int r) const {
    if (r < 1) throw std::invalid_argument("power_sum: r must be >= 1");
    double sum = 0.0, c = 0.0;
    for (double p : probs_) {
        double term = 1.0;
        for (int k = 0; k < r; ++k) term *= p;
        double y = term - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double Distribution::lr_norm(int r) const {
    return std::pow(power_sum(r), 1.0 / static_cast<double>(r));
}

namespace {

void check_same_domain(const Distribution& p, const Distribution& q) {
    if (p.domain_size() != q.domain_size())
        throw std::invalid_argument("distance: domain size mismatch");
}

}  // namespace

double l2_distance_squared(const Distribution& p, const Distribution& q) {
    check_same_domain(p, q);
    double sum = 0.0, c = 0.0;
    for (std::int64_t i = 0; i < p.domain_size(); ++i) {
        double d = p.prob(i) - q.prob(i);
        double y = d * d - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double l1_distance(const Distribution& p, const Distribution& q) {
    check_same_domain(p, q);
    double sum = 0.0, c = 0.0;
    for (std::int64_t i = 0; i < p.domain_size(); ++i) {
        double y = std::abs(p.prob(i) - q.prob(i)) - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double l4_distance_squared(const Distribution& p, const Distribution& q) {
    check_same_domain(p, q);
    double sum = 0.0;
    for (std::int64_t i = 0; i < p.domain_size(); ++i) {
        double d = p.prob(i) - q.prob(i);
        sum += d * d * d * d;
    }
    return std::sqrt(sum);
}

AliasTable::AliasTable(const Distribution& d) {
    const auto& probs = d.probs();
    const std::size_t n = probs.size();
    accept_.assign(n, 0.0);
    alias_.assign(n, 0);

    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = probs[i] * static_cast<double>(n);

    std::vector<std::int32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::int32_t>(i));
    }

    while (!small.empty() && !large.empty()) {
        const std::int32_t s = small.back();
        small.pop_back();
        const std::int32_t l = large.back();
        accept_[static_cast<std::size_t>(s)] = scaled[static_cast<std::size_t>(s)];
        alias_[static_cast<std::size_t>(s)] = l;
        scaled[static_cast<std::size_t>(l)] -= 1.0 - scaled[static_cast<std::size_t>(s)];
        if (scaled[static_cast<std::size_t>(l)] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Leftovers are 1 up to roundoff.
    for (std::int32_t i : large) accept_[static_cast<std::size_t>(i)] = 1.0;
    for (std::int32_t i : small) accept_[static_cast<std::size_t>(i)] = 1.0;
}

std::int64_t AliasTable::draw(Rng& rng) const {
    const std::uint64_t bits = rng();
    const std::size_t n = accept_.size();
    const std::size_t cell = static_cast<std::size_t>(bits % n);
    // 53-bit uniform in [0,1) from a fresh word, independent of cell choice.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < accept_[cell]) return static_cast<std::int64_t>(cell);
    return alias_[cell];
}

SampleSet sample(const AliasTable& table, std::int64_t m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample: m must be >= 1");
    SampleSet s;
    s.seed = seed;
    s.draws.resize(static_cast<std::size_t>(m));
    Rng rng = make_rng(seed);
    for (auto& d : s.draws) d = static_cast<std::int32_t>(table.draw(rng));
    return s;
}

SampleSet sample(const Distribution& d, std::int64_t m, std::uint64_t seed) {
    return sample(AliasTable(d), m, seed);
}

Histogram histogram(const SampleSet& s, std::int64_t n) {
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(n), 0);
    h.m = s.size();
    for (std::int32_t d : s.draws) {
        if (d < 0 || d >= n) throw std::out_of_range("histogram: draw outside domain");
        ++h.counts[static_cast<std::size_t>(d)];
    }
    return h;
}

Histogram histogram_from_counts(std::vector<std::int64_t> counts) {
    Histogram h;
    h.m = 0;
    for (std::int64_t c : counts) {
        if (c < 0) throw std::invalid_argument("histogram: negative count");
        h.m += c;
    }
    h.counts = std::move(counts);
    return h;
}

Histogram sample_histogram(const AliasTable& table, std::int64_t m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample_histogram: m must be >= 1");
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(table.domain_size()), 0);
    h.m = m;
    Rng rng = make_rng(seed);
    for (std::int64_t k = 0; k < m; ++k) ++h.counts[static_cast<std::size_t>(table.draw(rng))];
    return h;
}

FamilyKind parse_family_kind(const std::string& name) {
    if (name == "uniform") return FamilyKind::Uniform;
    if (name == "two-point") return FamilyKind::TwoPoint;
    if (name == "pm" || name == "pm-perturbation") return FamilyKind::PmPerturbation;
    if (name == "spike") return FamilyKind::Spike;
    if (name == "zipf") return FamilyKind::Zipf;
    throw std::invalid_argument("unknown family kind: " + name);
}

std::string family_kind_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Uniform: return "uniform";
        case FamilyKind::TwoPoint: return "two-point";
        case FamilyKind::PmPerturbation: return "pm";
        case FamilyKind::Spike: return "spike";
        case FamilyKind::Zipf: return "zipf";
    }
    throw std::logic_error("unreachable");
}

Distribution uniform_distribution(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("uniform: n must be >= 1");
    return Distribution(std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

Distribution make_family(FamilyKind kind, std::int64_t n, double param) {
    switch (kind) {
        case FamilyKind::Uniform:
            return uniform_distribution(n);
        case FamilyKind::TwoPoint: {
            if (!(param > 0.0 && param <= 0.5))
                throw std::invalid_argument("two-point: gamma must be in (0, 1/2]");
            return Distribution({0.5 + param, 0.5 - param});
        }
        case FamilyKind::PmPerturbation: {
            if (n < 2 || n % 2 != 0)
                throw std::invalid_argument("pm family: n must be even and >= 2");
            if (!(param > 0.0 && param <= 0.5))
                throw std::invalid_argument("pm family: eps must be in (0, 1/2]");
            std::vector<double> w(static_cast<std::size_t>(n));
            const double hi = (1.0 + 2.0 * param) / static_cast<double>(n);
            const double lo = (1.0 - 2.0 * param) / static_cast<double>(n);
            for (std::int64_t i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = (i % 2 == 0) ? hi : lo;
            Distribution d(std::move(w));
            // Algebraic identities of the construction, checked on every build.
            const Distribution u = uniform_distribution(n);
            const double want_l2 = 4.0 * param * param / static_cast<double>(n);
            if (std::abs(l2_distance_squared(d, u) - want_l2) > 1e-12)
                throw std::logic_error("pm family: l2 identity violated");
            if (std::abs(l1_distance(d, u) - 2.0 * param) > 1e-12)
                throw std::logic_error("pm family: l1 identity violated");
            return d;
        }
        case FamilyKind::Spike: {
            if (n < 2) throw std::invalid_argument("spike family: n must be >= 2");
            const double max_a = 1.0 - 1.0 / static_cast<double>(n);
            if (!(param > 0.0 && param <= max_a))
                throw std::invalid_argument("spike family: a must be in (0, 1-1/n]");
            std::vector<double> w(static_cast<std::size_t>(n),
                                  1.0 / static_cast<double>(n) - param / static_cast<double>(n - 1));
            w[0] = 1.0 / static_cast<double>(n) + param;
            if (w[1] < 0.0) throw std::invalid_argument("spike family: deficit exceeds base mass");
            return Distribution(std::move(w));
        }
        case FamilyKind::Zipf: {
            if (n < 1) throw std::invalid_argument("zipf: n must be >= 1");
            if (!(param > 0.0)) throw std::invalid_argument("zipf: s must be positive");
            std::vector<double> w(static_cast<std::size_t>(n));
            for (std::int64_t i = 0; i < n; ++i)
                w[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(i + 1), -param);
            return Distribution(std::move(w));
        }
    }
    throw std::logic_error("unreachable");
}

Distribution make_family(const std::string& kind, std::int64_t n, double param) {
    return make_family(parse_family_kind(kind), n, param);
}

}  // namespace colltest
