#include <doctest.h>

#include <cmath>
#include <random>

#include "colltest/moments.hpp"
#include "colltest/oracle.hpp"

using namespace colltest;

namespace {

Distribution random_distribution(std::mt19937_64& gen, std::int64_t n) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = u(gen);
    return Distribution(std::move(w));
}

// O(m^2) reference: count equal unordered pairs straight from the draws.
std::int64_t pairwise_self_collisions(const SampleSet& s) {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < s.draws.size(); ++i)
        for (std::size_t j = i + 1; j < s.draws.size(); ++j)
            if (s.draws[i] == s.draws[j]) ++c;
    return c;
}

std::int64_t pairwise_cross_collisions(const SampleSet& a, const SampleSet& b) {
    std::int64_t c = 0;
    for (std::int32_t x : a.draws)
        for (std::int32_t y : b.draws)
            if (x == y) ++c;
    return c;
}

}  // namespace

TEST_CASE("self_collisions on fixed counts") {
    CHECK(self_collisions(histogram_from_counts({3, 0})) == 3);
    CHECK(self_collisions(histogram_from_counts({1, 1, 1})) == 0);
    CHECK(self_collisions(histogram_from_counts({2, 2})) == 2);
}

TEST_CASE("cross_collisions on fixed counts") {
    CHECK(cross_collisions(histogram_from_counts({2, 1}), histogram_from_counts({1, 2})) == 4);
    CHECK(cross_collisions(histogram_from_counts({3, 0}), histogram_from_counts({0, 3})) == 0);
    CHECK(cross_collisions(histogram_from_counts({5, 0}), histogram_from_counts({5, 0})) == 25);
    CHECK_THROWS(cross_collisions(histogram_from_counts({1, 1}), histogram_from_counts({1, 1, 0})));
}

TEST_CASE("collision counts match pairwise enumeration") {
    std::mt19937_64 gen(10);
    for (int rep = 0; rep < 20; ++rep) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(gen() % 8);
        const std::int64_t m = 2 + static_cast<std::int64_t>(gen() % 199);
        const Distribution p = random_distribution(gen, n);
        const Distribution q = random_distribution(gen, n);
        const SampleSet sp = sample(p, m, gen());
        const SampleSet sq = sample(q, m, gen());
        CHECK(self_collisions(histogram(sp, n)) == pairwise_self_collisions(sp));
        CHECK(cross_collisions(histogram(sp, n), histogram(sq, n)) ==
              pairwise_cross_collisions(sp, sq));
    }
}

TEST_CASE("collision count overflow is a checked error") {
    CHECK_THROWS(self_collisions(histogram_from_counts({std::int64_t{1} << 33})));
}

TEST_CASE("closeness statistic and its decomposition on fixed histograms") {
    const Histogram hp = histogram_from_counts({2, 1});
    const Histogram hq = histogram_from_counts({1, 2});
    CHECK(closeness_statistic(hp, hq) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    CHECK(statistic_a(hp, hq) == doctest::Approx(-4.0).epsilon(1e-15));
    CHECK(statistic_b(hp, hq) == doctest::Approx(4.0).epsilon(1e-15));

    const std::int64_t m = 6;
    const Histogram point = histogram_from_counts({m, 0});
    CHECK(closeness_statistic(point, point) == doctest::Approx(0.0));
    const Histogram other = histogram_from_counts({0, m});
    CHECK(closeness_statistic(point, other) ==
          doctest::Approx(static_cast<double>(m * (m - 1))).epsilon(1e-15));

    CHECK_THROWS(closeness_statistic(histogram_from_counts({2, 0}), histogram_from_counts({1, 0})));
    CHECK_THROWS(closeness_statistic(histogram_from_counts({1, 0}), histogram_from_counts({1, 0})));
}

TEST_CASE("Z identity on random histograms") {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 200; ++rep) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(gen() % 10);
        const std::int64_t m = 2 + static_cast<std::int64_t>(gen() % 400);
        const Distribution p = random_distribution(gen, n);
        const Distribution q = random_distribution(gen, n);
        const Histogram hp = sample_histogram(AliasTable(p), m, gen());
        const Histogram hq = sample_histogram(AliasTable(q), m, gen());
        const double z = closeness_statistic(hp, hq);
        const double md = static_cast<double>(m);
        const double recon = ((md - 1.0) / (2.0 * md)) * statistic_a(hp, hq) +
                             statistic_b(hp, hq) / (2.0 * md);
        CHECK(std::abs(z - recon) <= 1e-9 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("expected_s") {
    CHECK(expected_s(uniform_distribution(10), 5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(expected_s(Distribution({0.75, 0.25}), 2) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(expected_s(Distribution({1.0, 0.0}), 4) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("exact_var_s") {
    CHECK(exact_var_s(Distribution({0.5, 0.5}), 2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(exact_var_s(Distribution({0.75, 0.25}), 2) ==
          doctest::Approx(15.0 / 64.0).epsilon(1e-12));
    CHECK(exact_var_s(Distribution({1.0, 0.0}), 7) == doctest::Approx(0.0));
}

TEST_CASE("var_bound_s") {
    const std::int64_t m = 9;
    CHECK(var_bound_s(uniform_distribution(5), m) ==
          doctest::Approx(static_cast<double>(m * m) / 5.0).epsilon(1e-12));
    CHECK(var_bound_s(Distribution({0.75, 0.25}), 3) ==
          doctest::Approx(6.890625).epsilon(1e-12));

    std::mt19937_64 gen(12);
    for (int rep = 0; rep < 100; ++rep) {
        const Distribution p = random_distribution(gen, 2 + rep % 6);
        const std::int64_t mm = 2 + static_cast<std::int64_t>(gen() % 40);
        CHECK(var_bound_s(p, mm) >= exact_var_s(p, mm) - 1e-12);
    }
}

TEST_CASE("expected_z") {
    const Distribution p({0.6, 0.4}), u = uniform_distribution(2);
    CHECK(expected_z(p, p, 5) == doctest::Approx(0.0));
    CHECK(expected_z(Distribution({1.0, 0.0}), Distribution({0.0, 1.0}), 2) ==
          doctest::Approx(2.0).epsilon(1e-15));
    CHECK(expected_z(p, u, 4) == doctest::Approx(0.12).epsilon(1e-12));
    // symmetric in its arguments
    CHECK(expected_z(p, u, 4) == doctest::Approx(expected_z(u, p, 4)).epsilon(1e-15));
}

TEST_CASE("exact_var_a_terms against enumeration") {
    {
        const Distribution point({1.0, 0.0});
        const MomentReport r = exact_var_a_terms(point, point, 3);
        CHECK(*r.variance_exact == doctest::Approx(0.0).epsilon(1e-12));
    }
    {
        const Distribution u2 = uniform_distribution(2);
        const MomentReport r = exact_var_a_terms(u2, u2, 2);
        const ClosenessExactMoments em = enumerate_moments_closeness(u2, u2, 2);
        CHECK(*r.variance_exact == doctest::Approx(em.a.variance).epsilon(1e-9));
        CHECK(r.expectation == doctest::Approx(em.a.mean).epsilon(1e-9));
    }
    {
        const Distribution p({0.7, 0.3}), q({0.2, 0.8});
        const MomentReport r = exact_var_a_terms(p, q, 3);
        const ClosenessExactMoments em = enumerate_moments_closeness(p, q, 3);
        CHECK(*r.variance_exact == doctest::Approx(em.a.variance).epsilon(1e-9));
        CHECK(r.expectation == doctest::Approx(em.a.mean).epsilon(1e-9));
        // per-power decomposition reassembles the total
        const double m = 3.0;
        const double total = r.terms.at("m1") * m + r.terms.at("m2") * m * m +
                             r.terms.at("m3") * m * m * m;
        CHECK(total == doctest::Approx(*r.variance_exact).epsilon(1e-9));
    }
}

TEST_CASE("var_bound_a") {
    const Distribution u3 = uniform_distribution(3);
    const std::int64_t m = 5;
    const double b = 0.5;
    CHECK(var_bound_a(u3, u3, m, b) ==
          doctest::Approx(100.0 * static_cast<double>(m * m) * b).epsilon(1e-12));
    CHECK(var_bound_a(Distribution({1.0, 0.0}), Distribution({0.0, 1.0}), 2, 1.0) ==
          doctest::Approx(528.0).epsilon(1e-12));
    // b below the actual norms is rejected
    CHECK_THROWS(var_bound_a(Distribution({1.0, 0.0}), Distribution({0.0, 1.0}), 2, 0.5));
}

TEST_CASE("var_bound_z") {
    const Distribution u2 = uniform_distribution(2);
    CHECK(var_bound_z(u2, u2, 2, 0.5) == doctest::Approx(232.0).epsilon(1e-12));

    // doubling m at fixed (p, q, b) scales the m^3 term by exactly 8
    const Distribution p({0.7, 0.3}), q({0.4, 0.6});
    const double b = 1.0;
    for (const std::int64_t m : {3, 10, 25}) {
        const double lo = var_bound_z(p, q, m, b) - 116.0 * static_cast<double>(m * m) * b;
        const double hi =
            var_bound_z(p, q, 2 * m, b) - 116.0 * static_cast<double>(4 * m * m) * b;
        CHECK(hi == doctest::Approx(8.0 * lo).epsilon(1e-12));
    }
    // symmetric in p and q
    CHECK(var_bound_z(p, q, 4, b) == doctest::Approx(var_bound_z(q, p, 4, b)).epsilon(1e-15));
    CHECK_THROWS(var_bound_z(p, q, 4, 0.1));
}

TEST_CASE("exact and bounded Var[B]") {
    const Distribution p({0.7, 0.3}), q({0.2, 0.8});
    for (const std::int64_t m : {2, 3, 5, 8}) {
        CHECK(exact_var_b(p, q, m) ==
              doctest::Approx(4.0 * (exact_var_s(p, m) + exact_var_s(q, m))).epsilon(1e-12));
        CHECK(var_bound_b(p, q, m) >= exact_var_b(p, q, m) - 1e-12);
    }
    const ClosenessExactMoments em = enumerate_moments_closeness(p, q, 3);
    CHECK(exact_var_b(p, q, 3) == doctest::Approx(em.b.variance).epsilon(1e-9));
}

TEST_CASE("covariance building blocks at pinned points") {
    const Distribution u2 = uniform_distribution(2);
    const CrossMoments cm = cross_moments(u2, u2, 2, 0, 1);
    CHECK(cm.cov_x_x == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(cm.cov_x2_x == doctest::Approx(-1.0).epsilon(1e-12));

    // a zero-probability site contributes nothing
    const Distribution z({0.0, 0.5, 0.5});
    const SiteMoments sm = site_moments(z, z, 4, 0);
    CHECK(sm.var_x == doctest::Approx(0.0));
    CHECK(sm.var_x2 == doctest::Approx(0.0));
    CHECK(sm.var_xy == doctest::Approx(0.0));
    CHECK(sm.var_a == doctest::Approx(0.0));

    CHECK_THROWS(cross_moments(u2, u2, 2, 1, 1));
}

TEST_CASE("statistics are permutation invariant") {
    const Histogram hp = histogram_from_counts({4, 1, 2});
    const Histogram hq = histogram_from_counts({2, 2, 3});
    const Histogram hp2 = histogram_from_counts({2, 4, 1});
    const Histogram hq2 = histogram_from_counts({3, 2, 2});
    CHECK(self_collisions(hp) == self_collisions(hp2));
    CHECK(cross_collisions(hp, hq) == cross_collisions(hp2, hq2));
    CHECK(closeness_statistic(hp, hq) ==
          doctest::Approx(closeness_statistic(hp2, hq2)).epsilon(1e-15));
}

TEST_CASE("l2 norm estimator from collisions") {
    // all samples equal: the estimate saturates at 1
    CHECK(estimate_l2_norm_squared(histogram_from_counts({10, 0})) ==
          doctest::Approx(1.0).epsilon(1e-15));
    // unbiasedness at tiny scale: E[2s/(m(m-1))] = ||p||_2^2 by enumeration
    const Distribution p({0.75, 0.25});
    const double mean_est = enumerate_expectation(
        p, 3, [](const Histogram& h) { return estimate_l2_norm_squared(h); });
    CHECK(mean_est == doctest::Approx(p.l2_norm_squared()).epsilon(1e-12));
}
