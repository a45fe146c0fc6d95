#include "colltest/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "colltest/rng.hpp"

namespace colltest {

MPolicy parse_m_policy(const std::string& name) {
    if (name == "paper") return MPolicy::PaperFormula;
    if (name == "list") return MPolicy::ExplicitList;
    if (name == "search") return MPolicy::BinarySearch;
    throw std::invalid_argument("unknown m policy: " + name);
}

void validate(const SweepSpec& spec) {
    if (spec.ns.empty()) throw std::invalid_argument("sweep: empty n grid");
    if (spec.epss.empty()) throw std::invalid_argument("sweep: empty eps grid");
    if (spec.trials < 100) throw std::invalid_argument("sweep: trials must be >= 100");
    if (!spec.has_seed) throw std::invalid_argument("sweep: seed is required");
    if (spec.policy == MPolicy::ExplicitList && spec.explicit_ms.empty())
        throw std::invalid_argument("sweep: explicit m policy needs an m list");
    for (double e : spec.epss)
        if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("sweep: eps out of (0, 1]");
    for (std::int64_t n : spec.ns)
        if (n < 2) throw std::invalid_argument("sweep: n must be >= 2");
}

Distribution sweep_far_family(const std::string& family, std::int64_t n, double eps,
                              double param) {
    const FamilyKind kind = parse_family_kind(family);
    if (kind == FamilyKind::PmPerturbation && param == 0.0) {
        // ||p - U_n||_2^2 = 4 (eps/2)^2 / n = eps^2/n: the soundness boundary.
        return make_family(kind, n, eps / 2.0);
    }
    return make_family(kind, n, param);
}

namespace {

bool probe_uniformity(std::int64_t n, double eps, const Distribution& far_p, std::int64_t m,
                      std::int64_t trials, std::uint64_t seed) {
    UniformityScenario complete{uniform_distribution(n), Side::Completeness, n, eps, m, "probe-c"};
    UniformityScenario sound{far_p, Side::Soundness, n, eps, m, "probe-s"};
    const auto ec = estimate_error_rate(complete, trials, derive_seed(seed, 1));
    if (4 * ec.failures > trials) return false;
    const auto es = estimate_error_rate(sound, trials, derive_seed(seed, 2));
    return 4 * es.failures <= trials;
}

}  // namespace

std::int64_t search_min_samples_uniformity(std::int64_t n, double eps, const Distribution& far_p,
                                           std::int64_t trials_per_probe, std::uint64_t seed) {
    std::int64_t lo = std::max<std::int64_t>(
        2, static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
    std::int64_t hi = required_samples_uniformity(n, eps);
    std::uint64_t probe = 0;
    if (probe_uniformity(n, eps, far_p, lo, trials_per_probe, derive_seed(seed, probe++)))
        return lo;
    while (static_cast<double>(hi) > 1.25 * static_cast<double>(lo)) {
        const std::int64_t mid = static_cast<std::int64_t>(
            std::llround(std::sqrt(static_cast<double>(lo) * static_cast<double>(hi))));
        if (probe_uniformity(n, eps, far_p, mid, trials_per_probe, derive_seed(seed, probe++)))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double calibrate_closeness_constant(const Distribution& p_near, const Distribution& q_far,
                                    double eps, double b, std::int64_t trials_per_probe,
                                    std::uint64_t seed) {
    auto probe = [&](double c, std::uint64_t probe_seed) {
        const std::int64_t m = required_samples_closeness(b, eps, c);
        if (m < 2) return false;
        ClosenessScenario complete{p_near, p_near, Side::Completeness, eps, m,
                                   std::nullopt,   false,              "cal-c"};
        ClosenessScenario sound{p_near, q_far,        Side::Soundness, eps, m,
                                std::nullopt, false, "cal-s"};
        const auto ec = estimate_error_rate(complete, trials_per_probe, derive_seed(probe_seed, 1));
        if (4 * ec.failures > trials_per_probe) return false;
        const auto es = estimate_error_rate(sound, trials_per_probe, derive_seed(probe_seed, 2));
        return 4 * es.failures <= trials_per_probe;
    };
    double lo = 1.0, hi = kClosenessConstant;
    std::uint64_t idx = 0;
    if (probe(lo, derive_seed(seed, idx++))) return lo;
    while (hi > 1.25 * lo) {
        const double mid = std::sqrt(lo * hi);
        if (probe(mid, derive_seed(seed, idx++)))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    validate(spec);
    std::vector<SweepRow> rows;
    std::uint64_t cell = 0;
    for (std::int64_t n : spec.ns) {
        for (double eps : spec.epss) {
            const std::uint64_t cell_seed = derive_seed(spec.base_seed, cell++);
            const Distribution far_p = sweep_far_family(spec.family, n, eps, spec.param);

            std::vector<std::int64_t> ms;
            if (spec.policy == MPolicy::PaperFormula) {
                ms.push_back(required_samples_uniformity(n, eps));
            } else if (spec.policy == MPolicy::ExplicitList) {
                ms = spec.explicit_ms;
            } else {
                ms.push_back(search_min_samples_uniformity(n, eps, far_p, spec.trials,
                                                           derive_seed(cell_seed, 0xbeef)));
            }

            for (std::int64_t m : ms) {
                UniformityScenario complete{uniform_distribution(n), Side::Completeness,
                                            n,                       eps,
                                            m,                       "completeness"};
                UniformityScenario sound{far_p, Side::Soundness, n, eps, m, "soundness"};
                const auto ec =
                    estimate_error_rate(complete, spec.trials, derive_seed(cell_seed, 1));
                const auto es = estimate_error_rate(sound, spec.trials, derive_seed(cell_seed, 2));
                const char* tag =
                    spec.policy == MPolicy::BinarySearch ? "search-" : "";
                for (const auto& [scn, est, fam, par] :
                     {std::tuple{std::string(tag) + "completeness", ec, std::string("uniform"),
                                 0.0},
                      std::tuple{std::string(tag) + "soundness", es, spec.family,
                                 spec.param == 0.0 ? eps / 2.0 : spec.param}}) {
                    SweepRow row;
                    row.scenario = scn;
                    row.family = fam;
                    row.param = par;
                    row.n = n;
                    row.eps = eps;
                    row.m = m;
                    row.trials = est.trials;
                    row.failures = est.failures;
                    row.err_lo = est.lo;
                    row.err_hi = est.hi;
                    row.seed = est.base_seed;
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

const char* const kSweepCsvHeader = "scenario,family,param,n,eps,m,trials,failures,err_lo,err_hi,seed";

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepCsvHeader << "\n";
    os << std::setprecision(17);
    for (const auto& r : rows) {
        os << r.scenario << ',' << r.family << ',' << r.param << ',' << r.n << ',' << r.eps << ','
           << r.m << ',' << r.trials << ',' << r.failures << ',' << r.err_lo << ',' << r.err_hi
           << ',' << r.seed << "\n";
    }
}

std::vector<SweepRow> parse_csv(std::istream& is) {
    std::vector<SweepRow> rows;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
    if (line != kSweepCsvHeader) throw std::invalid_argument("csv: unexpected header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        SweepRow r;
        auto next = [&] {
            if (!std::getline(ss, field, ',')) throw std::invalid_argument("csv: short row");
            return field;
        };
        r.scenario = next();
        r.family = next();
        r.param = std::stod(next());
        r.n = std::stoll(next());
        r.eps = std::stod(next());
        r.m = std::stoll(next());
        r.trials = std::stoll(next());
        r.failures = std::stoll(next());
        r.err_lo = std::stod(next());
        r.err_hi = std::stod(next());
        r.seed = std::stoull(next());
        rows.push_back(std::move(r));
    }
    return rows;
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need >= 2 points");
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double nd = static_cast<double>(n);
    return (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
}

void write_svg_loglog(std::ostream& os, const std::vector<double>& xs,
                      const std::vector<double>& ys, double reference_slope,
                      const std::string& x_label, const std::string& y_label) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("svg: point count mismatch");
    const double w = 480, h = 360, margin = 50;
    auto log_range = [](const std::vector<double>& v) {
        double lo = std::log10(*std::min_element(v.begin(), v.end()));
        double hi = std::log10(*std::max_element(v.begin(), v.end()));
        if (hi - lo < 1e-9) { lo -= 0.5; hi += 0.5; }
        const double pad = 0.05 * (hi - lo);
        return std::pair{lo - pad, hi + pad};
    };
    const auto [xlo, xhi] = log_range(xs);
    const auto [ylo, yhi] = log_range(ys);
    auto px = [&](double x) { return margin + (std::log10(x) - xlo) / (xhi - xlo) * (w - 2 * margin); };
    auto py = [&](double y) { return h - margin - (std::log10(y) - ylo) / (yhi - ylo) * (h - 2 * margin); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\"" << w - margin
       << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
       << h - margin << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">" << x_label
       << " (log)</text>\n";
    os << "<text x=\"14\" y=\"" << h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << h / 2 << ")\">" << y_label << " (log)</text>\n";

    // Reference line of the given slope through the centroid.
    double cx = 0, cy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cx += std::log10(xs[i]);
        cy += std::log10(ys[i]);
    }
    cx /= static_cast<double>(xs.size());
    cy /= static_cast<double>(xs.size());
    const double y_at_lo = cy + reference_slope * (xlo - cx);
    const double y_at_hi = cy + reference_slope * (xhi - cx);
    auto pxl = [&](double lx) { return margin + (lx - xlo) / (xhi - xlo) * (w - 2 * margin); };
    auto pyl = [&](double ly) { return h - margin - (ly - ylo) / (yhi - ylo) * (h - 2 * margin); };
    os << "<line x1=\"" << pxl(xlo) << "\" y1=\"" << pyl(y_at_lo) << "\" x2=\"" << pxl(xhi)
       << "\" y2=\"" << pyl(y_at_hi)
       << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

    for (std::size_t i = 0; i < xs.size(); ++i) {
        os << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i])
           << "\" r=\"4\" fill=\"steelblue\"/>\n";
    }
    os << "</svg>\n";
}

}  // namespace colltest
