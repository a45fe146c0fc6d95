#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "colltest/distribution.hpp"

namespace colltest {

// Closed-form expectation/variance for a statistic under given (p, q, m).
// `variance_exact` is present when the exact polynomial is implemented,
// `variance_bound` is the published upper bound; `terms` carries named
// sub-quantities (e.g. per-power-of-m coefficient sums) so tests can check
// the algebra term by term.
struct MomentReport {
    double expectation = 0.0;
    std::optional<double> variance_exact;
    double variance_bound = 0.0;
    std::map<std::string, double> terms;
};

// --- collision counts ------------------------------------------------------

// Number of unordered equal pairs among the samples: sum_i X_i(X_i-1)/2.
std::int64_t self_collisions(const Histogram& h);

// Number of equal ordered cross pairs between two sample sets: sum_i X_i Y_i.
std::int64_t cross_collisions(const Histogram& hp, const Histogram& hq);

// Z = C1 + C2 - ((m-1)/m) C3 from the two histograms.
double closeness_statistic(const Histogram& hp, const Histogram& hq);

// The two pieces of the decomposition Z = ((m-1)/(2m)) A + (1/(2m)) B with
// A = sum_i [(X_i-Y_i)^2 - X_i - Y_i], B = sum_i [X_i(X_i-1) + Y_i(Y_i-1)].
double statistic_a(const Histogram& hp, const Histogram& hq);
double statistic_b(const Histogram& hp, const Histogram& hq);

// --- uniformity statistic moments ------------------------------------------

// E[s] = C(m,2) ||p||_2^2.
double expected_s(const Distribution& p, std::int64_t m);

// Exact Var[s] = C(m,2)(||p||_2^2 - ||p||_2^4) + m(m-1)(m-2)(||p||_3^3 - ||p||_2^4).
double exact_var_s(const Distribution& p, std::int64_t m);

// Published bound m^2 ||p||_2^2 + m^3 (||p||_3^3 - ||p||_2^4); dominates exact_var_s.
double var_bound_s(const Distribution& p, std::int64_t m);

// --- closeness statistic moments -------------------------------------------

// E[Z] = C(m,2) ||p-q||_2^2.
double expected_z(const Distribution& p, const Distribution& q, std::int64_t m);

// Exact Var[A] assembled from the exact per-site Var(A_i) polynomial and the
// exact cross-site cov(A_i, A_j) polynomial. The report exposes the summed
// coefficient of each power of m ("m1", "m2", "m3") plus the variance and
// covariance totals; variance_bound is var_bound_a at b = max norm.
MomentReport exact_var_a_terms(const Distribution& p, const Distribution& q, std::int64_t m);

// 100 m^2 b + 8 m^3 sum_i (p_i-q_i)(p_i^2-q_i^2); dominates exact Var[A].
double var_bound_a(const Distribution& p, const Distribution& q, std::int64_t m, double b);

// 4 m^2 (||p||_2^2+||q||_2^2) + 4 m^3 (||p||_3^3-||p||_2^4+||q||_3^3-||q||_2^4).
double var_bound_b(const Distribution& p, const Distribution& q, std::int64_t m);

// Exact Var[B] = 4 (exact_var_s(p,m) + exact_var_s(q,m)), by independence of
// the two sample sets.
double exact_var_b(const Distribution& p, const Distribution& q, std::int64_t m);

// 116 m^2 b + 16 m^3 ||p-q||_4^2 b^{1/2}; dominates the exact Var[Z].
double var_bound_z(const Distribution& p, const Distribution& q, std::int64_t m, double b);

// --- binomial covariance building blocks ------------------------------------

// Closed-form second moments of the per-element counts X_i ~ Bin(m, p_i),
// Y_i ~ Bin(m, q_i) (independent across sets). All are exact polynomials.
struct SiteMoments {
    double var_x;         // Var(X_i)
    double var_x2;        // Var(X_i^2)
    double cov_x2_x;      // cov(X_i^2, X_i)
    double var_xy;        // Var(X_i Y_i)
    double cov_x2_xy;     // cov(X_i^2, X_i Y_i)
    double cov_x_xy;      // cov(X_i, X_i Y_i)
    double var_a;         // Var(A_i)
};

struct CrossMoments {
    double cov_x_x;       // cov(X_i, X_j) = -m p_i p_j
    double cov_x2_x;      // cov(X_i^2, X_j)
    double cov_x2_x2;     // cov(X_i^2, X_j^2)
    double cov_xy_xy;     // cov(X_i Y_i, X_j Y_j)
    double cov_xy_x;      // cov(X_i Y_i, X_j)
    double cov_a_a;       // cov(A_i, A_j)
};

SiteMoments site_moments(const Distribution& p, const Distribution& q, std::int64_t m,
                         std::int64_t i);
CrossMoments cross_moments(const Distribution& p, const Distribution& q, std::int64_t m,
                           std::int64_t i, std::int64_t j);

// Unbiased estimate of ||p||_2^2 from observed self-collisions:
// 2 s / (m (m-1)). Convenience for users without an l2-norm promise; carries
// no theorem guarantee.
double estimate_l2_norm_squared(const Histogram& h);

}  // namespace colltest
