#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "colltest/montecarlo.hpp"

namespace colltest {

enum class MPolicy { PaperFormula, ExplicitList, BinarySearch };

MPolicy parse_m_policy(const std::string& name);

// A grid of uniformity experiments. For each (n, eps) cell the sample size
// comes from the policy; every cell is evaluated on both sides (completeness
// with the uniform family, soundness with the configured far family).
struct SweepSpec {
    std::string family = "pm";   // soundness family
    double param = 0.0;          // family parameter; 0 means "derived from eps"
    std::vector<std::int64_t> ns;
    std::vector<double> epss;
    MPolicy policy = MPolicy::PaperFormula;
    std::vector<std::int64_t> explicit_ms;  // used by ExplicitList
    std::int64_t trials = 200;
    std::uint64_t base_seed = 0;
    bool has_seed = false;       // seeds are mandatory; no wall-clock default
};

struct SweepRow {
    std::string scenario;
    std::string family;
    double param = 0.0;
    std::int64_t n = 0;
    double eps = 0.0;
    std::int64_t m = 0;
    std::int64_t trials = 0;
    std::int64_t failures = 0;
    double err_lo = 0.0;
    double err_hi = 1.0;
    std::uint64_t seed = 0;
};

void validate(const SweepSpec& spec);
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// The soundness distribution a sweep cell tests against. When param is 0 the
// perturbation is chosen so that ||p - U_n||_2^2 = eps^2/n, the boundary of
// the soundness promise.
Distribution sweep_far_family(const std::string& family, std::int64_t n, double eps, double param);

// Smallest m (up to bracket ratio 1.25) at which both sides of the
// uniformity promise succeed with rate >= 3/4. Geometric bisection over
// [sqrt(n), 3200 sqrt(n)/eps^2]; returns the upper bracket end.
std::int64_t search_min_samples_uniformity(std::int64_t n, double eps, const Distribution& far_p,
                                           std::int64_t trials_per_probe, std::uint64_t seed);

// Smallest constant c (bracket ratio 1.25) such that m = ceil(c sqrt(b)/eps^2)
// succeeds on both sides of a closeness instance. Informational calibration;
// never a substitute for the derived default.
double calibrate_closeness_constant(const Distribution& p_near, const Distribution& q_far,
                                    double eps, double b, std::int64_t trials_per_probe,
                                    std::uint64_t seed);

// csv columns: scenario,family,param,n,eps,m,trials,failures,err_lo,err_hi,seed
extern const char* const kSweepCsvHeader;
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(std::istream& is);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// Minimal log-log scatter plot with a reference line of the given slope.
void write_svg_loglog(std::ostream& os, const std::vector<double>& xs,
                      const std::vector<double>& ys, double reference_slope,
                      const std::string& x_label, const std::string& y_label);

}  // namespace colltest
