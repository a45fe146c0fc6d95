#include <doctest.h>

#include <cmath>
#include <random>

#include "colltest/moments.hpp"
#include "colltest/montecarlo.hpp"
#include "colltest/oracle.hpp"
#include "colltest/verification.hpp"

using namespace colltest;

TEST_CASE("enumerate_moments_s at pinned instances") {
    {
        const ExactMoments em = enumerate_moments_s(uniform_distribution(2), 2);
        CHECK(em.mean == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(em.variance == doctest::Approx(0.25).epsilon(1e-12));
    }
    {
        const ExactMoments em = enumerate_moments_s(Distribution({1.0, 0.0}), 3);
        CHECK(em.mean == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(em.variance == doctest::Approx(0.0).epsilon(1e-12));
    }
    {
        const ExactMoments em = enumerate_moments_s(Distribution({0.75, 0.25}), 3);
        CHECK(em.mean == doctest::Approx(1.875).epsilon(1e-12));
    }
}

TEST_CASE("sequence and histogram enumeration agree") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> w{u(gen), u(gen), u(gen)};
        const Distribution p(w);
        const ExactMoments a = enumerate_moments_s(p, 5, EnumerationMethod::Sequences);
        const ExactMoments b = enumerate_moments_s(p, 5, EnumerationMethod::Histograms);
        CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
        CHECK(a.second_moment == doctest::Approx(b.second_moment).epsilon(1e-12));
    }
}

TEST_CASE("enumerated probabilities close to 1") {
    const Distribution p({0.3, 0.45, 0.25});
    for (const auto method : {EnumerationMethod::Sequences, EnumerationMethod::Histograms}) {
        CHECK(std::abs(enumeration_probability_mass(p, 6, method) - 1.0) <= 1e-12);
    }
}

TEST_CASE("enumeration budget is enforced") {
    const Distribution p = uniform_distribution(10);
    CHECK_THROWS(enumerate_moments_s(p, 10, EnumerationMethod::Sequences, 1e3));
    CHECK_THROWS(enumerate_moments_closeness(p, p, 20, EnumerationMethod::Sequences, 1e4));
}

TEST_CASE("enumerate_moments_closeness at pinned instances") {
    {
        const Distribution point({1.0, 0.0});
        const ClosenessExactMoments em = enumerate_moments_closeness(point, point, 2);
        CHECK(em.z.mean == doctest::Approx(0.0));
        CHECK(em.z.variance == doctest::Approx(0.0));
    }
    {
        const ClosenessExactMoments em =
            enumerate_moments_closeness(Distribution({1.0, 0.0}), Distribution({0.0, 1.0}), 2);
        CHECK(em.z.mean == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(em.z.variance == doctest::Approx(0.0).epsilon(1e-12));
    }
    {
        const ClosenessExactMoments em =
            enumerate_moments_closeness(Distribution({0.7, 0.3}), Distribution({0.2, 0.8}), 3);
        CHECK(em.z.mean == doctest::Approx(1.5).epsilon(1e-12));
    }
}

TEST_CASE("wilson interval") {
    const auto [lo0, hi0] = wilson_interval(0, 400);
    CHECK(lo0 == doctest::Approx(0.0));
    CHECK(hi0 == doctest::Approx(0.01631659421382909).epsilon(1e-12));

    const auto [lo3, hi3] = wilson_interval(3, 400);
    CHECK(lo3 == doctest::Approx(0.001896542128418751).epsilon(1e-12));
    CHECK(hi3 == doctest::Approx(0.0291753031722029).epsilon(1e-12));

    const auto [loa, hia] = wilson_interval(400, 400);
    CHECK(loa == doctest::Approx(0.983683405786171).epsilon(1e-12));
    CHECK(hia == doctest::Approx(1.0));

    const auto [loh, hih] = wilson_interval(50, 100);
    CHECK(loh == doctest::Approx(0.3752796250448398).epsilon(1e-12));
    CHECK(hih == doctest::Approx(0.6247203749551602).epsilon(1e-12));

    // interval always brackets the point estimate inside [0, 1]
    for (std::int64_t s : {std::int64_t{0}, std::int64_t{1}, std::int64_t{57}, std::int64_t{100}}) {
        const auto [lo, hi] = wilson_interval(s, 100);
        const double point = static_cast<double>(s) / 100.0;
        CHECK(0.0 <= lo);
        CHECK(lo <= point);
        CHECK(point <= hi);
        CHECK(hi <= 1.0);
    }
}

TEST_CASE("error-rate estimation: determinism and validation") {
    // point mass on n=2 with eps=1 is a deterministic soundness win:
    // s = C(m,2) far above threshold, so failures must be exactly 0.
    UniformityScenario sc{Distribution({1.0, 0.0}), Side::Soundness, 2, 1.0, 200, "point-mass"};
    const ErrorRateEstimate a = estimate_error_rate(sc, 100, 5);
    CHECK(a.failures == 0);
    CHECK(a.hi < 0.25);

    const ErrorRateEstimate b = estimate_error_rate(sc, 100, 5);
    CHECK(a.failures == b.failures);
    CHECK(a.point == b.point);

    // fewer than 100 trials is rejected
    CHECK_THROWS(estimate_error_rate(sc, 50, 5));

    // a completeness scenario whose family is actually far is rejected
    UniformityScenario bad{Distribution({1.0, 0.0}), Side::Completeness, 2, 1.0, 200, "bad"};
    CHECK_THROWS(estimate_error_rate(bad, 100, 5));

    // closeness promise enforcement: b below the norms is rejected...
    ClosenessScenario cbad{uniform_distribution(2), uniform_distribution(2),
                           Side::Completeness,      1.0,
                           64,                      0.1,
                           true,                    "b-too-small"};
    CHECK_THROWS(estimate_error_rate(cbad, 100, 5));
    // ...unless enforcement is explicitly off
    cbad.enforce_promise = false;
    CHECK_NOTHROW(estimate_error_rate(cbad, 100, 5));
}

TEST_CASE("verification grid machinery") {
    const auto grid2 = probability_grid(2, 8);
    CHECK(grid2.size() == 9);  // (k, 8-k) for k = 0..8
    const auto grid3 = probability_grid(3, 8);
    CHECK(grid3.size() == 45);  // compositions of 8 into 3 parts

    GridOptions small;
    small.ms = {2};
    const VerificationReport report = verify_oracle_grid(small);
    CHECK(report.pass(1e-9));
    for (const auto& [bound, count] : report.bound_violations) CHECK(count == 0);
}
