#pragma once

#include <cstdint>
#include <functional>

#include "colltest/distribution.hpp"

namespace colltest {

// Ground-truth first and second moments computed by exhaustive enumeration
// of the outcome space on tiny instances.
struct ExactMoments {
    double mean = 0.0;
    double variance = 0.0;
    double second_moment = 0.0;
};

struct ClosenessExactMoments {
    ExactMoments z;
    ExactMoments a;
    ExactMoments b;
    double cov_ab = 0.0;
};

enum class EnumerationMethod {
    Auto,        // sequences up to 1e5 outcomes, histograms beyond
    Sequences,   // all n^m sample sequences
    Histograms,  // all count vectors, weighted by multinomial coefficients
};

constexpr double kDefaultEnumerationBudget = 1e7;

// Weighted expectation of f(counts) over the sampling distribution of the
// histogram of m iid draws from p. Throws when the outcome space exceeds
// the budget.
double enumerate_expectation(const Distribution& p, std::int64_t m,
                             const std::function<double(const Histogram&)>& f,
                             EnumerationMethod method = EnumerationMethod::Auto,
                             double budget = kDefaultEnumerationBudget);

// Same over the product space of two independent sample sets.
double enumerate_pair_expectation(const Distribution& p, const Distribution& q, std::int64_t m,
                                  const std::function<double(const Histogram&, const Histogram&)>& f,
                                  EnumerationMethod method = EnumerationMethod::Auto,
                                  double budget = kDefaultEnumerationBudget);

// Sum of enumerated outcome probabilities; equals 1 up to roundoff and is
// asserted to 1e-12 inside the enumerators.
double enumeration_probability_mass(const Distribution& p, std::int64_t m,
                                    EnumerationMethod method = EnumerationMethod::Auto,
                                    double budget = kDefaultEnumerationBudget);

// Exact moments of the collision statistic s.
ExactMoments enumerate_moments_s(const Distribution& p, std::int64_t m,
                                 EnumerationMethod method = EnumerationMethod::Auto,
                                 double budget = kDefaultEnumerationBudget);

// Exact moments of Z, A, B and cov(A, B) for the closeness statistic.
ClosenessExactMoments enumerate_moments_closeness(const Distribution& p, const Distribution& q,
                                                  std::int64_t m,
                                                  EnumerationMethod method = EnumerationMethod::Auto,
                                                  double budget = kDefaultEnumerationBudget);

}  // namespace colltest
