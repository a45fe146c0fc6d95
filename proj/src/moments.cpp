#include "colltest/moments.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace colltest {

namespace {

constexpr std::int64_t kMaxSamples = std::int64_t(1) << 32;

double choose2(std::int64_t m) {
    return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
}

void check_histogram_pair(const Histogram& hp, const Histogram& hq) {
    if (hp.domain_size() != hq.domain_size())
        throw std::invalid_argument("histogram pair: domain size mismatch");
    if (hp.m != hq.m) throw std::invalid_argument("histogram pair: sample count mismatch");
}

void check_dist_pair(const Distribution& p, const Distribution& q) {
    if (p.domain_size() != q.domain_size())
        throw std::invalid_argument("distribution pair: domain size mismatch");
}

class KahanAccumulator {
  public:
    void add(double x) {
        double y = x - c_;
        double t = sum_ + y;
        c_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

}  // namespace

std::int64_t self_collisions(const Histogram& h) {
    if (h.m > kMaxSamples) throw std::overflow_error("self_collisions: m too large for 64-bit count");
    __int128 total = 0;
    for (std::int64_t x : h.counts) total += (__int128)x * (x - 1) / 2;
    if (total > INT64_MAX) throw std::overflow_error("self_collisions: count overflow");
    return static_cast<std::int64_t>(total);
}

std::int64_t cross_collisions(const Histogram& hp, const Histogram& hq) {
    if (hp.domain_size() != hq.domain_size())
        throw std::invalid_argument("cross_collisions: domain size mismatch");
    if (hp.m > kMaxSamples || hq.m > kMaxSamples)
        throw std::overflow_error("cross_collisions: m too large for 64-bit count");
    __int128 total = 0;
    for (std::size_t i = 0; i < hp.counts.size(); ++i)
        total += (__int128)hp.counts[i] * hq.counts[i];
    if (total > INT64_MAX) throw std::overflow_error("cross_collisions: count overflow");
    return static_cast<std::int64_t>(total);
}

double statistic_a(const Histogram& hp, const Histogram& hq) {
    check_histogram_pair(hp, hq);
    double a = 0.0;
    for (std::size_t i = 0; i < hp.counts.size(); ++i) {
        const double d = static_cast<double>(hp.counts[i] - hq.counts[i]);
        a += d * d - static_cast<double>(hp.counts[i]) - static_cast<double>(hq.counts[i]);
    }
    return a;
}

double statistic_b(const Histogram& hp, const Histogram& hq) {
    check_histogram_pair(hp, hq);
    return 2.0 * (static_cast<double>(self_collisions(hp)) + static_cast<double>(self_collisions(hq)));
}

double closeness_statistic(const Histogram& hp, const Histogram& hq) {
    check_histogram_pair(hp, hq);
    if (hp.m < 2) throw std::invalid_argument("closeness_statistic: m must be >= 2");
    const double m = static_cast<double>(hp.m);
    const double c1 = static_cast<double>(self_collisions(hp));
    const double c2 = static_cast<double>(self_collisions(hq));
    const double c3 = static_cast<double>(cross_collisions(hp, hq));
    const double z = c1 + c2 - (m - 1.0) / m * c3;
#ifndef NDEBUG
    const double via_ab =
        (m - 1.0) / (2.0 * m) * statistic_a(hp, hq) + 1.0 / (2.0 * m) * statistic_b(hp, hq);
    assert(std::abs(z - via_ab) <= 1e-9 * std::max(1.0, std::abs(z)));
#endif
    return z;
}

double expected_s(const Distribution& p, std::int64_t m) {
    if (m < 2) throw std::invalid_argument("expected_s: m must be >= 2");
    return choose2(m) * p.l2_norm_squared();
}

double exact_var_s(const Distribution& p, std::int64_t m) {
    if (m < 2) throw std::invalid_argument("exact_var_s: m must be >= 2");
    const double s2 = p.power_sum(2);
    const double s3 = p.power_sum(3);
    const double s2sq = s2 * s2;
    const double md = static_cast<double>(m);
    return choose2(m) * (s2 - s2sq) + md * (md - 1.0) * (md - 2.0) * (s3 - s2sq);
}

double var_bound_s(const Distribution& p, std::int64_t m) {
    if (m < 2) throw std::invalid_argument("var_bound_s: m must be >= 2");
    const double s2 = p.power_sum(2);
    const double s3 = p.power_sum(3);
    const double md = static_cast<double>(m);
    return md * md * s2 + md * md * md * (s3 - s2 * s2);
}

double expected_z(const Distribution& p, const Distribution& q, std::int64_t m) {
    if (m < 2) throw std::invalid_argument("expected_z: m must be >= 2");
    check_dist_pair(p, q);
    return choose2(m) * l2_distance_squared(p, q);
}

SiteMoments site_moments(const Distribution& p, const Distribution& q, std::int64_t m,
                         std::int64_t i) {
    check_dist_pair(p, q);
    if (m < 2) throw std::invalid_argument("site_moments: m must be >= 2");
    if (i < 0 || i >= p.domain_size()) throw std::out_of_range("site_moments: index");
    const double md = static_cast<double>(m);
    const double m2 = md * md, m3 = m2 * md;
    const double pi = p.prob(i), qi = q.prob(i);
    const double pi2 = pi * pi, pi3 = pi2 * pi, pi4 = pi3 * pi;
    const double qi2 = qi * qi, qi3 = qi2 * qi, qi4 = qi3 * qi;

    SiteMoments s{};
    s.var_x = md * pi * (1.0 - pi);
    s.cov_x2_x = md * pi * (1.0 - pi) * (1.0 - 2.0 * pi) + 2.0 * m2 * pi2 * (1.0 - pi);
    s.var_x2 = md * pi - 7.0 * md * pi2 + 6.0 * m2 * pi2 + 12.0 * md * pi3 - 16.0 * m2 * pi3 +
               4.0 * m3 * pi3 - 6.0 * md * pi4 + 10.0 * m2 * pi4 - 4.0 * m3 * pi4;
    s.var_xy = m2 * pi * qi + m2 * pi2 * qi2 - m2 * (pi * qi2 + pi2 * qi) +
               m3 * (pi * qi2 + pi2 * qi) - 2.0 * m3 * pi2 * qi2;
    s.cov_x2_xy = s.cov_x2_x * md * qi;   // cov(X^2, XY) = cov(X^2, X) E[Y]
    s.cov_x_xy = s.var_x * md * qi;       // cov(X, XY)   = Var(X) E[Y]

    // Exact Var(A_i) as a polynomial in m.
    const double c1 = -2.0 * pi2 + 8.0 * pi3 - 6.0 * pi4 - 2.0 * qi2 + 8.0 * qi3 - 6.0 * qi4;
    const double sum_pq = pi + qi;
    const double c2 = 2.0 * sum_pq * sum_pq - 12.0 * pi3 + 10.0 * pi4 + 4.0 * pi2 * qi -
                      8.0 * pi3 * qi + 4.0 * pi * qi2 + 4.0 * pi2 * qi2 - 12.0 * qi3 -
                      8.0 * pi * qi3 + 10.0 * qi4;
    const double diff = pi - qi;
    const double c3 = 4.0 * diff * diff * (pi * (1.0 - pi) + qi * (1.0 - qi));
    s.var_a = md * c1 + m2 * c2 + m3 * c3;
    return s;
}

CrossMoments cross_moments(const Distribution& p, const Distribution& q, std::int64_t m,
                           std::int64_t i, std::int64_t j) {
    check_dist_pair(p, q);
    if (m < 2) throw std::invalid_argument("cross_moments: m must be >= 2");
    if (i == j) throw std::invalid_argument("cross_moments: i and j must differ");
    if (i < 0 || i >= p.domain_size() || j < 0 || j >= p.domain_size())
        throw std::out_of_range("cross_moments: index");
    const double md = static_cast<double>(m);
    const double m2 = md * md, m3 = m2 * md;
    const double pi = p.prob(i), pj = p.prob(j), qi = q.prob(i), qj = q.prob(j);

    CrossMoments c{};
    c.cov_x_x = -md * pi * pj;
    c.cov_x2_x = -md * pi * pj - 2.0 * md * (md - 1.0) * pi * pi * pj;
    c.cov_x2_x2 = -md * pi * pj - 2.0 * md * (md - 1.0) * (pi * pi * pj + pi * pj * pj) -
                  2.0 * md * (md - 1.0) * (2.0 * md - 3.0) * pi * pi * pj * pj;
    c.cov_xy_xy = (m2 - 2.0 * m3) * pi * pj * qi * qj;
    c.cov_xy_x = c.cov_x_x * md * qi;  // cov(X_i Y_i, X_j) = cov(X_i, X_j) E[Y_i]

    const double pp = pi * pi * pj * pj, qq = qi * qi * qj * qj;
    const double di = pi - qi, dj = pj - qj;
    const double c_m = -6.0 * (pp + qq);
    const double c_m2 = 2.0 * (5.0 * pp + 5.0 * qq - 6.0 * pi * pj * qi * qj -
                               2.0 * pi * qi * dj * dj - 2.0 * pj * qj * di * di);
    const double c_m3 = -4.0 * di * dj * (pi * pj + qi * qj);
    c.cov_a_a = md * c_m + m2 * c_m2 + m3 * c_m3;
    return c;
}

MomentReport exact_var_a_terms(const Distribution& p, const Distribution& q, std::int64_t m) {
    check_dist_pair(p, q);
    if (m < 2) throw std::invalid_argument("exact_var_a_terms: m must be >= 2");
    const std::int64_t n = p.domain_size();
    const double md = static_cast<double>(m);

    // Per-power-of-m coefficient sums, accumulated with compensated summation;
    // the m^3 coefficients cancel heavily when p is close to q.
    KahanAccumulator c1, c2, c3, var_sum;
    for (std::int64_t i = 0; i < n; ++i) {
        const double pi = p.prob(i), qi = q.prob(i);
        const double pi2 = pi * pi, pi3 = pi2 * pi, pi4 = pi3 * pi;
        const double qi2 = qi * qi, qi3 = qi2 * qi, qi4 = qi3 * qi;
        const double sum_pq = pi + qi, di = pi - qi;
        c1.add(-2.0 * pi2 + 8.0 * pi3 - 6.0 * pi4 - 2.0 * qi2 + 8.0 * qi3 - 6.0 * qi4);
        c2.add(2.0 * sum_pq * sum_pq - 12.0 * pi3 + 10.0 * pi4 + 4.0 * pi2 * qi - 8.0 * pi3 * qi +
               4.0 * pi * qi2 + 4.0 * pi2 * qi2 - 12.0 * qi3 - 8.0 * pi * qi3 + 10.0 * qi4);
        c3.add(4.0 * di * di * (pi * (1.0 - pi) + qi * (1.0 - qi)));
    }
    var_sum.add(md * c1.value());
    var_sum.add(md * md * c2.value());
    var_sum.add(md * md * md * c3.value());
    const double var_ai_total = var_sum.value();

    // Cross terms: each power-of-m coefficient of sum_{i != j} cov(A_i, A_j)
    // is separable, so the O(n^2) double sum reduces to O(n) power sums.
    KahanAccumulator sp2q2, spq, sp2q2sq, spq_d2, sdp, sdq, sd2p2, sd2q2;
    const double d22 = l2_distance_squared(p, q);
    for (std::int64_t i = 0; i < n; ++i) {
        const double pi = p.prob(i), qi = q.prob(i), di = pi - qi;
        sp2q2.add(pi * pi * pi * pi + qi * qi * qi * qi);        // sum p^4 + q^4
        spq.add(pi * qi);                                        // sum p q
        sp2q2sq.add(pi * pi * qi * qi);                          // sum p^2 q^2
        spq_d2.add(pi * qi * di * di);                           // sum p q (p-q)^2
        sdp.add(di * pi);                                        // sum (p-q) p
        sdq.add(di * qi);                                        // sum (p-q) q
        sd2p2.add(di * di * pi * pi);                            // sum (p-q)^2 p^2
        sd2q2.add(di * di * qi * qi);                            // sum (p-q)^2 q^2
    }
    const double sumsq_p2 = p.power_sum(2) * p.power_sum(2) + q.power_sum(2) * q.power_sum(2);
    const double off_pp_qq = sumsq_p2 - sp2q2.value();           // sum_{i!=j} (pi^2 pj^2 + qi^2 qj^2)
    const double off_pqpq = spq.value() * spq.value() - sp2q2sq.value();
    const double off_pq_d2 = spq.value() * d22 - spq_d2.value();
    const double off_m3 = sdp.value() * sdp.value() - sd2p2.value() + sdq.value() * sdq.value() -
                          sd2q2.value();
    const double cov_m = -6.0 * off_pp_qq;
    const double cov_m2 = 2.0 * (5.0 * off_pp_qq - 6.0 * off_pqpq - 4.0 * off_pq_d2);
    const double cov_m3 = -4.0 * off_m3;
    const double cov_total = md * cov_m + md * md * cov_m2 + md * md * md * cov_m3;

    const double b_actual = std::max(p.l2_norm_squared(), q.l2_norm_squared());

    MomentReport r;
    // E[A] = sum_i E[(X_i-Y_i)^2 - X_i - Y_i]
    //      = m^2 ||p-q||_2^2 - m (||p||_2^2 + ||q||_2^2).
    r.expectation = md * md * d22 - md * (p.l2_norm_squared() + q.l2_norm_squared());
    r.variance_exact = var_ai_total + cov_total;
    r.variance_bound = var_bound_a(p, q, m, b_actual);
    r.terms["var_ai_sum"] = var_ai_total;
    r.terms["cov_aiaj_sum"] = cov_total;
    r.terms["m1"] = c1.value() + cov_m;
    r.terms["m2"] = c2.value() + cov_m2;
    r.terms["m3"] = c3.value() + cov_m3;
    return r;
}

double var_bound_a(const Distribution& p, const Distribution& q, std::int64_t m, double b) {
    check_dist_pair(p, q);
    if (m < 2) throw std::invalid_argument("var_bound_a: m must be >= 2");
    const double b_min = std::max(p.l2_norm_squared(), q.l2_norm_squared());
    if (b < b_min - 1e-12)
        throw std::invalid_argument("var_bound_a: b below max(||p||_2^2, ||q||_2^2)");
    const double md = static_cast<double>(m);
    KahanAccumulator s;
    for (std::int64_t i = 0; i < p.domain_size(); ++i) {
        const double pi = p.prob(i), qi = q.prob(i);
        s.add((pi - qi) * (pi * pi - qi * qi));
    }
    return 100.0 * md * md * b + 8.0 * md * md * md * s.value();
}

double var_bound_b(const Distribution& p, const Distribution& q, std::int64_t m) {
    check_dist_pair(p, q);
    if (m < 2) throw std::invalid_argument("var_bound_b: m must be >= 2");
    const double md = static_cast<double>(m);
    const double p2 = p.power_sum(2), p3 = p.power_sum(3);
    const double q2 = q.power_sum(2), q3 = q.power_sum(3);
    return 4.0 * md * md * (p2 + q2) + 4.0 * md * md * md * (p3 - p2 * p2 + q3 - q2 * q2);
}

double exact_var_b(const Distribution& p, const Distribution& q, std::int64_t m) {
    return 4.0 * (exact_var_s(p, m) + exact_var_s(q, m));
}

double var_bound_z(const Distribution& p, const Distribution& q, std::int64_t m, double b) {
    check_dist_pair(p, q);
    if (m < 2) throw std::invalid_argument("var_bound_z: m must be >= 2");
    const double b_min = std::max(p.l2_norm_squared(), q.l2_norm_squared());
    if (b < b_min - 1e-12)
        throw std::invalid_argument("var_bound_z: b below max(||p||_2^2, ||q||_2^2)");
    const double md = static_cast<double>(m);
    return 116.0 * md * md * b + 16.0 * md * md * md * l4_distance_squared(p, q) * std::sqrt(b);
}

double estimate_l2_norm_squared(const Histogram& h) {
    if (h.m < 2) throw std::invalid_argument("estimate_l2_norm_squared: m must be >= 2");
    const double md = static_cast<double>(h.m);
    return 2.0 * static_cast<double>(self_collisions(h)) / (md * (md - 1.0));
}

}  // namespace colltest
