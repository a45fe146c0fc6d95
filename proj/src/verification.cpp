#include "colltest/verification.hpp"

#include <cmath>
#include <stdexcept>

#include "colltest/moments.hpp"

namespace colltest {

namespace {

struct Outcome {
    std::vector<std::int64_t> counts;
    double weight;
};

// All histograms of m draws over [n] with their multinomial probabilities.
// This enumerator is local to the verification harness and shares no code
// with the closed forms it checks.
std::vector<Outcome> histogram_outcomes(const Distribution& p, std::int64_t m) {
    const std::int64_t n = p.domain_size();
    std::vector<double> fact(static_cast<std::size_t>(m + 1), 1.0);
    for (std::int64_t k = 2; k <= m; ++k)
        fact[static_cast<std::size_t>(k)] = fact[static_cast<std::size_t>(k - 1)] * k;

    std::vector<Outcome> outcomes;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
    double closure = 0.0;
    auto recurse = [&](auto&& self, std::int64_t index, std::int64_t remaining) -> void {
        if (index == n - 1) {
            counts[static_cast<std::size_t>(index)] = remaining;
            double w = fact[static_cast<std::size_t>(m)];
            for (std::int64_t i = 0; i < n; ++i) {
                const std::int64_t c = counts[static_cast<std::size_t>(i)];
                w /= fact[static_cast<std::size_t>(c)];
                for (std::int64_t k = 0; k < c; ++k) w *= p.prob(i);
            }
            if (w > 0.0) outcomes.push_back({counts, w});
            closure += w;
            return;
        }
        for (std::int64_t c = 0; c <= remaining; ++c) {
            counts[static_cast<std::size_t>(index)] = c;
            self(self, index + 1, remaining - c);
        }
    };
    recurse(recurse, 0, m);
    if (std::abs(closure - 1.0) > 1e-12)
        throw std::logic_error("verification: outcome probabilities do not sum to 1");
    return outcomes;
}

struct DeviationTracker {
    std::map<std::string, double>& worst;

    void record(const std::string& formula, double closed, double enumerated) {
        const double scale = std::max(std::abs(enumerated), 1.0);
        const double dev = std::abs(closed - enumerated) / scale;
        auto it = worst.find(formula);
        if (it == worst.end() || dev > it->second) worst[formula] = dev;
    }
};

}  // namespace

bool VerificationReport::pass(double tolerance) const {
    for (const auto& [formula, dev] : worst_deviation)
        if (dev > tolerance) return false;
    for (const auto& [bound, count] : bound_violations)
        if (count != 0) return false;
    return true;
}

std::vector<Distribution> probability_grid(std::int64_t n, int denominator) {
    if (n < 1 || denominator < 1) throw std::invalid_argument("probability_grid: bad arguments");
    std::vector<Distribution> grid;
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    auto recurse = [&](auto&& self, std::int64_t index, int remaining) -> void {
        if (index == n - 1) {
            w[static_cast<std::size_t>(index)] =
                static_cast<double>(remaining) / static_cast<double>(denominator);
            grid.emplace_back(w);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            w[static_cast<std::size_t>(index)] =
                static_cast<double>(k) / static_cast<double>(denominator);
            self(self, index + 1, remaining - k);
        }
    };
    recurse(recurse, 0, denominator);
    return grid;
}

VerificationReport verify_oracle_grid(const GridOptions& options) {
    VerificationReport report;
    DeviationTracker dev{report.worst_deviation};
    auto& violations = report.bound_violations;
    violations["var_bound_s"] = 0;
    violations["var_bound_a"] = 0;
    violations["var_bound_b"] = 0;
    violations["var_bound_z"] = 0;

    const double slack = 1e-9;  // bounds may only fail by genuine margin, not roundoff

    for (std::int64_t n : options.ns) {
        const std::vector<Distribution> grid = probability_grid(n, options.denominator);
        for (std::int64_t m : options.ms) {
            // --- single-set formulas ---
            for (const Distribution& p : grid) {
                const auto outcomes = histogram_outcomes(p, m);
                double es = 0, es2 = 0;
                for (const auto& o : outcomes) {
                    double s = 0;
                    for (std::int64_t c : o.counts) s += static_cast<double>(c * (c - 1)) / 2.0;
                    es += o.weight * s;
                    es2 += o.weight * s * s;
                }
                const double enum_var = es2 - es * es;
                double closed_var = exact_var_s(p, m);
                if (options.mutate_m3) {
                    const double s2 = p.power_sum(2), s3 = p.power_sum(3);
                    const double md = static_cast<double>(m);
                    closed_var -= 2.0 * md * (md - 1.0) * (md - 2.0) * (s3 - s2 * s2);
                }
                dev.record("expected_s", expected_s(p, m), es);
                dev.record("exact_var_s", closed_var, enum_var);
                if (var_bound_s(p, m) < enum_var - slack) ++violations["var_bound_s"];
                ++report.instances_checked;
            }

            // --- product-space formulas ---
            for (const Distribution& p : grid) {
                const auto xout = histogram_outcomes(p, m);
                // Marginal moments of X from the p-side alone.
                const std::size_t un = static_cast<std::size_t>(n);
                std::vector<double> ex(un, 0), ex2(un, 0), ex3(un, 0), ex4(un, 0);
                std::vector<std::vector<double>> exx(un, std::vector<double>(un, 0)),
                    ex2x(un, std::vector<double>(un, 0)), ex2x2(un, std::vector<double>(un, 0));
                for (const auto& o : xout) {
                    for (std::size_t i = 0; i < un; ++i) {
                        const double xi = static_cast<double>(o.counts[i]);
                        ex[i] += o.weight * xi;
                        ex2[i] += o.weight * xi * xi;
                        ex3[i] += o.weight * xi * xi * xi;
                        ex4[i] += o.weight * xi * xi * xi * xi;
                        for (std::size_t j = 0; j < un; ++j) {
                            if (i == j) continue;
                            const double xj = static_cast<double>(o.counts[j]);
                            exx[i][j] += o.weight * xi * xj;
                            ex2x[i][j] += o.weight * xi * xi * xj;
                            ex2x2[i][j] += o.weight * xi * xi * xj * xj;
                        }
                    }
                }
                const Distribution& uniform_q = p;  // X-only checks need no q
                for (std::size_t i = 0; i < un; ++i) {
                    const auto site = site_moments(p, uniform_q, m, static_cast<std::int64_t>(i));
                    dev.record("var_x", site.var_x, ex2[i] - ex[i] * ex[i]);
                    dev.record("var_x2", site.var_x2, ex4[i] - ex2[i] * ex2[i]);
                    dev.record("cov_x2_x", site.cov_x2_x, ex3[i] - ex2[i] * ex[i]);
                    for (std::size_t j = 0; j < un; ++j) {
                        if (i == j) continue;
                        const auto cross = cross_moments(p, uniform_q, m,
                                                         static_cast<std::int64_t>(i),
                                                         static_cast<std::int64_t>(j));
                        dev.record("cov_xi_xj", cross.cov_x_x, exx[i][j] - ex[i] * ex[j]);
                        dev.record("cov_xi2_xj", cross.cov_x2_x, ex2x[i][j] - ex2[i] * ex[j]);
                        dev.record("cov_xi2_xj2", cross.cov_x2_x2, ex2x2[i][j] - ex2[i] * ex2[j]);
                    }
                }

                for (const Distribution& q : grid) {
                    const auto yout = histogram_outcomes(q, m);
                    const double md = static_cast<double>(m);

                    double ez = 0, ez2 = 0, ea = 0, ea2 = 0, eb = 0, eb2 = 0;
                    std::vector<double> e_ai(un, 0), e_ai2(un, 0), e_xy(un, 0), e_xy2(un, 0),
                        e_x3y(un, 0), e_x2y(un, 0);
                    std::vector<std::vector<double>> e_aiaj(un, std::vector<double>(un, 0)),
                        e_xyxy(un, std::vector<double>(un, 0)), e_xyx(un, std::vector<double>(un, 0));

                    for (const auto& ox : xout) {
                        for (const auto& oy : yout) {
                            const double w = ox.weight * oy.weight;
                            double a = 0, bstat = 0;
                            std::vector<double> ai(un);
                            for (std::size_t i = 0; i < un; ++i) {
                                const double xi = static_cast<double>(ox.counts[i]);
                                const double yi = static_cast<double>(oy.counts[i]);
                                ai[i] = (xi - yi) * (xi - yi) - xi - yi;
                                a += ai[i];
                                bstat += xi * (xi - 1.0) + yi * (yi - 1.0);
                            }
                            const double z = (md - 1.0) / (2.0 * md) * a + bstat / (2.0 * md);
                            ez += w * z;
                            ez2 += w * z * z;
                            ea += w * a;
                            ea2 += w * a * a;
                            eb += w * bstat;
                            eb2 += w * bstat * bstat;
                            for (std::size_t i = 0; i < un; ++i) {
                                const double xi = static_cast<double>(ox.counts[i]);
                                const double yi = static_cast<double>(oy.counts[i]);
                                e_ai[i] += w * ai[i];
                                e_ai2[i] += w * ai[i] * ai[i];
                                e_xy[i] += w * xi * yi;
                                e_xy2[i] += w * xi * yi * xi * yi;
                                e_x3y[i] += w * xi * xi * xi * yi;
                                e_x2y[i] += w * xi * xi * yi;
                                for (std::size_t j = 0; j < un; ++j) {
                                    if (i == j) continue;
                                    const double xj = static_cast<double>(ox.counts[j]);
                                    const double yj = static_cast<double>(oy.counts[j]);
                                    e_aiaj[i][j] += w * ai[i] * ai[j];
                                    e_xyxy[i][j] += w * xi * yi * xj * yj;
                                    e_xyx[i][j] += w * xi * yi * xj;
                                }
                            }
                        }
                    }

                    dev.record("expected_z", expected_z(p, q, m), ez);
                    const MomentReport var_a = exact_var_a_terms(p, q, m);
                    double closed_var_a = *var_a.variance_exact;
                    if (options.mutate_m3)
                        closed_var_a -= 2.0 * md * md * md * var_a.terms.at("m3");
                    const double enum_var_a = ea2 - ea * ea;
                    dev.record("exact_var_a", closed_var_a, enum_var_a);
                    dev.record("expected_a", var_a.expectation, ea);

                    const double enum_var_z = ez2 - ez * ez;
                    const double enum_var_b = eb2 - eb * eb;
                    dev.record("exact_var_b", exact_var_b(p, q, m), enum_var_b);

                    const double b_promise = std::max(p.l2_norm_squared(), q.l2_norm_squared());
                    if (b_promise > 0.0) {
                        if (var_bound_a(p, q, m, b_promise) < enum_var_a - slack)
                            ++violations["var_bound_a"];
                        if (var_bound_z(p, q, m, b_promise) < enum_var_z - slack)
                            ++violations["var_bound_z"];
                    }
                    if (var_bound_b(p, q, m) < enum_var_b - slack) ++violations["var_bound_b"];

                    for (std::size_t i = 0; i < un; ++i) {
                        const auto site = site_moments(p, q, m, static_cast<std::int64_t>(i));
                        dev.record("var_xy", site.var_xy, e_xy2[i] - e_xy[i] * e_xy[i]);
                        dev.record("cov_x2_xy", site.cov_x2_xy, e_x3y[i] - ex2[i] * e_xy[i]);
                        dev.record("cov_x_xy", site.cov_x_xy, e_x2y[i] - ex[i] * e_xy[i]);
                        dev.record("var_a_site", site.var_a, e_ai2[i] - e_ai[i] * e_ai[i]);
                        for (std::size_t j = 0; j < un; ++j) {
                            if (i == j) continue;
                            const auto cross = cross_moments(p, q, m, static_cast<std::int64_t>(i),
                                                             static_cast<std::int64_t>(j));
                            dev.record("cov_xy_xy", cross.cov_xy_xy,
                                       e_xyxy[i][j] - e_xy[i] * e_xy[j]);
                            dev.record("cov_xy_x", cross.cov_xy_x,
                                       e_xyx[i][j] - e_xy[i] * ex[j]);
                            dev.record("cov_a_a", cross.cov_a_a,
                                       e_aiaj[i][j] - e_ai[i] * e_ai[j]);
                        }
                    }
                    ++report.instances_checked;
                }
            }
        }
    }
    return report;
}

}  // namespace colltest
