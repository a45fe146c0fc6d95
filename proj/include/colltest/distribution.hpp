#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "colltest/rng.hpp"

namespace colltest {

// A validated probability vector over {0, ..., n-1}. Immutable after
// construction; weights are normalized to sum 1 (tolerance 1e-12), negative
// or all-zero inputs are rejected.
class Distribution {
  public:
    explicit Distribution(std::vector<double> weights);

    std::int64_t domain_size() const { return static_cast<std::int64_t>(probs_.size()); }
    const std::vector<double>& probs() const { return probs_; }
    double prob(std::int64_t i) const { return probs_[static_cast<std::size_t>(i)]; }

    // Raw power sum sum_i p_i^r. The moment formulas consume these directly
    // (r = 2, 3, 4), so it is exposed alongside the norm itself.
    double power_sum(int r) const;
    double lr_norm(int r) const;
    double l2_norm_squared() const { return sum2_; }

  private:
    std::vector<double> probs_;
    double sum2_ = 0.0;
};

double l2_distance_squared(const Distribution& p, const Distribution& q);
double l1_distance(const Distribution& p, const Distribution& q);
// sqrt(sum_i (p_i-q_i)^4), i.e. the squared l4 norm of p-q.
double l4_distance_squared(const Distribution& p, const Distribution& q);

// Walker alias table: O(n) build, O(1) per draw. Build once and reuse when
// drawing many sample sets from the same distribution.
class AliasTable {
  public:
    explicit AliasTable(const Distribution& d);

    std::int64_t domain_size() const { return static_cast<std::int64_t>(accept_.size()); }
    std::int64_t draw(Rng& rng) const;

  private:
    std::vector<double> accept_;
    std::vector<std::int32_t> alias_;
};

// m iid draws (0-based element indices) plus the seed that produced them.
struct SampleSet {
    std::vector<std::int32_t> draws;
    std::uint64_t seed = 0;

    std::int64_t size() const { return static_cast<std::int64_t>(draws.size()); }
};

SampleSet sample(const Distribution& d, std::int64_t m, std::uint64_t seed);
SampleSet sample(const AliasTable& table, std::int64_t m, std::uint64_t seed);

// Occurrence counts of a sample set over domain [n]; the sufficient
// statistic for every tester in this library.
struct Histogram {
    std::vector<std::int64_t> counts;
    std::int64_t m = 0;

    std::int64_t domain_size() const { return static_cast<std::int64_t>(counts.size()); }
};

Histogram histogram(const SampleSet& s, std::int64_t n);
Histogram histogram_from_counts(std::vector<std::int64_t> counts);

// Histogram of m draws without materializing the sample sequence.
Histogram sample_histogram(const AliasTable& table, std::int64_t m, std::uint64_t seed);

enum class FamilyKind { Uniform, TwoPoint, PmPerturbation, Spike, Zipf };

FamilyKind parse_family_kind(const std::string& name);
std::string family_kind_name(FamilyKind kind);

// Named instance families used by the experiments:
//   uniform           U_n
//   two-point(gamma)  (1/2+gamma, 1/2-gamma) on n=2
//   pm(eps)           (1 +- 2 eps)/n on even n; ||p-U||_2^2 = 4 eps^2/n exactly
//   spike(a)          1/n + a on one element, deficit spread evenly;
//                     ||p-U||_2^2 = a^2 n/(n-1); reaches l2 distances the
//                     pm family cannot
//   zipf(s)           p_i proportional to (i+1)^-s, for realism sweeps
Distribution make_family(FamilyKind kind, std::int64_t n, double param);
Distribution make_family(const std::string& kind, std::int64_t n, double param);

Distribution uniform_distribution(std::int64_t n);

}  // namespace colltest
