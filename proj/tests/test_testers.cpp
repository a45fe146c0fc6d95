#include <doctest.h>

#include <cmath>
#include <random>

#include "colltest/testers.hpp"

using namespace colltest;

TEST_CASE("required_samples_uniformity") {
    CHECK(required_samples_uniformity(100, 0.5) == 128000);
    CHECK(required_samples_uniformity(4, 1.0) == 6400);
    // halving eps quadruples m (values chosen so the ceiling is exact)
    CHECK(required_samples_uniformity(4, 0.5) == 4 * required_samples_uniformity(4, 1.0));
    CHECK_THROWS(required_samples_uniformity(100, 0.0));
    CHECK_THROWS(required_samples_uniformity(100, 1.5));
    CHECK_THROWS(required_samples_uniformity(1, 0.5));
}

TEST_CASE("uniformity_threshold") {
    CHECK(uniformity_threshold(4, 10, 1.0) == doctest::Approx(1.05).epsilon(1e-15));
    CHECK(uniformity_threshold(2, 2, 1.0) == doctest::Approx(0.875).epsilon(1e-15));
    // strictly increasing in eps and in m
    CHECK(uniformity_threshold(4, 10, 0.5) < uniformity_threshold(4, 10, 0.6));
    CHECK(uniformity_threshold(4, 10, 0.5) < uniformity_threshold(5, 10, 0.5));
    // eps -> 0 limit is the null expectation C(m,2)/n
    CHECK(uniformity_threshold(6, 10, 1e-9) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("test_uniformity verdicts") {
    // all-distinct samples: s = 0, always YES
    const Verdict yes = test_uniformity(histogram_from_counts({1, 1, 1, 1}), 4, 0.5);
    CHECK(yes.yes());
    CHECK(yes.statistic == 0.0);

    // everything collides: far above threshold
    const Verdict no = test_uniformity(histogram_from_counts({100, 0, 0, 0}), 4, 0.5);
    CHECK(no.decision_no);

    CHECK_THROWS(test_uniformity(histogram_from_counts({1}), 1, 0.5));
}

TEST_CASE("decision boundary: statistic equal to threshold rejects") {
    // m=8, n=7, eps=1: t = 28 * 1.75 / 7 = 7 exactly; counts (4,2,1,1,...)
    // give s = 6 + 1 = 7.
    const Histogram at = histogram_from_counts({4, 2, 1, 1, 0, 0, 0});
    const Verdict v = test_uniformity(at, 7, 1.0);
    CHECK(v.statistic == 7.0);
    CHECK(v.threshold == 7.0);
    CHECK(v.decision_no);

    // one collision fewer flips the verdict
    const Histogram below = histogram_from_counts({4, 1, 1, 1, 1, 0, 0});
    CHECK(test_uniformity(below, 7, 1.0).yes());
}

TEST_CASE("required_samples_closeness") {
    CHECK(required_samples_closeness(1.0, 1.0) == 32768);
    CHECK(required_samples_closeness(0.01, 0.5) == 13108);
    // quadrupling b doubles m (exact-ceiling instances)
    CHECK(required_samples_closeness(0.25, 1.0) == 2 * required_samples_closeness(0.0625, 1.0));
    CHECK_THROWS(required_samples_closeness(0.0, 0.5));
    CHECK_THROWS(required_samples_closeness(1.5, 0.5));
    CHECK_THROWS(required_samples_closeness(0.5, 0.0));
    // the constant is overridable for calibration
    CHECK(required_samples_closeness(1.0, 1.0, 100.0) == 100);
}

TEST_CASE("closeness_threshold and verdicts") {
    CHECK(closeness_threshold(2, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(closeness_threshold(4, 0.5) < closeness_threshold(4, 0.6));
    CHECK(closeness_threshold(4, 0.5) < closeness_threshold(5, 0.5));

    // hp = hq = (1,1): Z = -1 < t
    const Verdict yes =
        test_closeness(histogram_from_counts({1, 1}), histogram_from_counts({1, 1}), 1.0);
    CHECK(yes.yes());
    CHECK(yes.statistic == doctest::Approx(-1.0).epsilon(1e-15));

    // disjoint point masses: Z = 2 C(m,2) >= C(m,2)/2
    const Verdict no =
        test_closeness(histogram_from_counts({6, 0}), histogram_from_counts({0, 6}), 1.0);
    CHECK(no.decision_no);

    CHECK_THROWS(test_closeness(histogram_from_counts({2, 0}), histogram_from_counts({3, 0}), 1.0));
}

TEST_CASE("verdicts are pure functions of their inputs") {
    const Histogram h = histogram_from_counts({3, 2, 1});
    const Verdict a = test_uniformity(h, 3, 0.7);
    const Verdict b = test_uniformity(h, 3, 0.7);
    CHECK(a.decision_no == b.decision_no);
    CHECK(a.statistic == b.statistic);
    CHECK(a.threshold == b.threshold);
}

TEST_CASE("chi_squared_statistic") {
    CHECK(chi_squared_statistic(histogram_from_counts({2, 0}), 2) == doctest::Approx(0.0));
    CHECK(chi_squared_statistic(histogram_from_counts({1, 1}), 2) == doctest::Approx(-2.0));
    // counts at exactly m/n give -m
    CHECK(chi_squared_statistic(histogram_from_counts({3, 3, 3}), 3) == doctest::Approx(-9.0));
}

TEST_CASE("chi-squared relates to collisions by chi2 = 2s - m^2/n") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(gen() % 9);
        const std::int64_t m = 2 + static_cast<std::int64_t>(gen() % 300);
        std::vector<double> w(static_cast<std::size_t>(n));
        for (auto& x : w) x = u(gen);
        const Histogram h = sample_histogram(AliasTable(Distribution(w)), m, gen());
        const double chi2 = chi_squared_statistic(h, n);
        const double rhs = 2.0 * static_cast<double>(self_collisions(h)) -
                           static_cast<double>(m) * static_cast<double>(m) / static_cast<double>(n);
        CHECK(chi2 == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("poissonized trial: determinism and point-mass structure") {
    const Distribution p({0.55, 0.45});
    CHECK(poissonized_collision_trial(p, 50.0, 123) ==
          poissonized_collision_trial(p, 50.0, 123));
    CHECK(poissonized_collision_trial(p, 50.0, 123) !=
          poissonized_collision_trial(p, 50.0, 124));

    // point mass: s = C(M, 2), a triangular number
    const Distribution point({1.0, 0.0});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const double s = poissonized_collision_trial(point, 30.0, seed);
        const double k = std::floor((1.0 + std::sqrt(1.0 + 8.0 * s)) / 2.0);
        CHECK(s == doctest::Approx(k * (k - 1.0) / 2.0));
    }
}
