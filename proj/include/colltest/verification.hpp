#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "colltest/distribution.hpp"

namespace colltest {

// Configuration of the closed-form-vs-enumeration validation grid:
// all distributions with probabilities k/denominator on domains `ns`,
// checked at every m in `ms` against exhaustive enumeration.
struct GridOptions {
    std::vector<std::int64_t> ns{2, 3};
    std::vector<std::int64_t> ms{2, 3, 4};
    int denominator = 8;
    double tolerance = 1e-9;
    double budget = 1e7;
    // Test fixture: flips the sign of the m^3 term in the exact variance
    // closed forms before comparing, to prove the harness catches a wrong
    // formula. Never set outside tests.
    bool mutate_m3 = false;
};

struct VerificationReport {
    // Worst relative deviation seen per formula (relative to the enumerated
    // value, floored at 1 to keep near-zero cases meaningful).
    std::map<std::string, double> worst_deviation;
    // Bound-domination violations per published bound; must all be zero.
    std::map<std::string, std::int64_t> bound_violations;
    std::int64_t instances_checked = 0;

    bool pass(double tolerance) const;
};

// All probability vectors over [n] with entries from {k/denominator}.
std::vector<Distribution> probability_grid(std::int64_t n, int denominator);

// Runs the full grid: every uniformity formula against single-set
// enumeration, every closeness formula and covariance building block against
// product-space enumeration, plus bound domination.
VerificationReport verify_oracle_grid(const GridOptions& options);

}  // namespace colltest
