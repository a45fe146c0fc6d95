#pragma once

#include <string>

#include <json.hpp>

#include "colltest/distribution.hpp"
#include "colltest/moments.hpp"
#include "colltest/montecarlo.hpp"
#include "colltest/testers.hpp"

namespace colltest {

// Distribution file: either a JSON array of weights or newline-delimited
// decimals; weights are auto-normalized on load.
Distribution load_distribution(const std::string& path);

// Sample file: newline-delimited 1-based element indices. Domain elements are
// 1-based in external formats and 0-based in memory; this is the boundary.
SampleSet load_samples(const std::string& path, std::int64_t n);
void save_samples(const std::string& path, const SampleSet& s);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const MomentReport& r);
nlohmann::json to_json(const ErrorRateEstimate& e);

// CSV row: scenario id, n, m, eps, trials, failures, lo, hi, seed.
std::string to_csv_row(const std::string& scenario_id, std::int64_t n, std::int64_t m, double eps,
                       const ErrorRateEstimate& e);

}  // namespace colltest
