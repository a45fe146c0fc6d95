// Command-line front end for the collision testers: run them on sample
// files or synthetic families, print moment reports, validate the closed
// forms against enumeration, and run sample-complexity sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "colltest/io.hpp"
#include "colltest/oracle.hpp"
#include "colltest/sweep.hpp"
#include "colltest/verification.hpp"

using namespace colltest;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;

void print_verdict(const Verdict& v, const std::string& format) {
    if (format == "csv") {
        std::ostringstream os;
        os.precision(17);
        os << "decision,statistic,threshold,m,n,epsilon,seed\n"
           << (v.decision_no ? "NO" : "YES") << ',' << v.statistic << ',' << v.threshold << ','
           << v.m << ',' << v.n << ',' << v.epsilon << ',';
        if (v.seed) os << *v.seed;
        std::cout << os.str() << "\n";
    } else {
        std::cout << to_json(v).dump(2) << "\n";
    }
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

struct SourceOpts {
    std::string input;
    std::string family;
    double param = 0.0;
};

// A histogram either parsed from a sample file or freshly sampled from a
// named family. Returns the seed actually used when sampling.
Histogram resolve_histogram(const SourceOpts& src, std::int64_t n, std::int64_t m,
                            std::uint64_t seed, bool* sampled) {
    *sampled = false;
    if (!src.input.empty()) {
        return histogram(load_samples(src.input, n), n);
    }
    if (src.family.empty()) throw std::runtime_error("either an input file or a family is required");
    const Distribution d = make_family(src.family, n, src.param);
    if (m < 2) throw std::runtime_error("sampling from a family requires --m >= 2");
    *sampled = true;
    return sample_histogram(AliasTable(d), m, seed);
}

int run(int argc, char** argv) {
    CLI::App app{"Collision-based uniformity and l2 closeness testing"};
    app.require_subcommand(1);

    std::string format = "json";
    app.add_option("--format", format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // --- test-uniformity ---
    auto* unif = app.add_subcommand("test-uniformity", "Collision uniformity tester");
    SourceOpts unif_src;
    std::int64_t unif_n = 0, unif_m = 0;
    double unif_eps = 0.0;
    std::uint64_t unif_seed = 0;
    bool unif_has_seed = false;
    unif->add_option("--input", unif_src.input, "Sample file (newline-delimited 1-based elements)");
    unif->add_option("--family", unif_src.family, "Synthetic family: uniform|two-point|pm|spike|zipf");
    unif->add_option("--param", unif_src.param, "Family parameter");
    unif->add_option("--n", unif_n, "Domain size")->required();
    unif->add_option("--eps", unif_eps, "Distance parameter in (0, 1]")->required();
    unif->add_option("--m", unif_m, "Sample count (default: 3200 sqrt(n)/eps^2 when sampling)");
    unif->add_option("--seed", unif_seed, "RNG seed (required when sampling from a family)")
        ->each([&](const std::string&) { unif_has_seed = true; });

    // --- test-closeness ---
    auto* close = app.add_subcommand("test-closeness", "Collision l2 closeness tester");
    SourceOpts close_src1, close_src2;
    std::int64_t close_n = 0, close_m = 0;
    double close_eps = 0.0, close_b = 0.0;
    std::uint64_t close_seed = 0;
    bool close_has_seed = false;
    close->add_option("--input", close_src1.input, "First sample file");
    close->add_option("--input2", close_src2.input, "Second sample file");
    close->add_option("--family", close_src1.family, "First synthetic family");
    close->add_option("--param", close_src1.param, "First family parameter");
    close->add_option("--family2", close_src2.family, "Second synthetic family");
    close->add_option("--param2", close_src2.param, "Second family parameter");
    close->add_option("--n", close_n, "Domain size (required when sampling)");
    close->add_option("--eps", close_eps, "Distance parameter in (0, 1]")->required();
    close->add_option("--b", close_b, "l2^2-norm promise (sets m when --m is absent)");
    close->add_option("--m", close_m, "Samples per distribution");
    close->add_option("--seed", close_seed, "RNG seed")
        ->each([&](const std::string&) { close_has_seed = true; });

    // --- moments ---
    auto* mom = app.add_subcommand("moments", "Closed-form moment report");
    std::string mom_p, mom_q;
    std::int64_t mom_m = 0;
    double mom_b = 0.0;
    mom->add_option("--p", mom_p, "Distribution file for p")->required();
    mom->add_option("--q", mom_q, "Distribution file for q (switches to closeness moments)");
    mom->add_option("--m", mom_m, "Sample count")->required();
    mom->add_option("--b", mom_b, "l2^2-norm promise (default: max of the actual norms)");

    // --- verify-oracle ---
    auto* verify = app.add_subcommand("verify-oracle", "Closed forms vs brute-force enumeration");
    double verify_budget = 1e7;
    std::int64_t verify_max_m = 4;
    bool mutate_m3 = false;
    verify->add_option("--budget", verify_budget, "Enumeration budget (outcome count)");
    verify->add_option("--max-m", verify_max_m, "Largest m in the grid (>= 2)");
    verify->add_flag("--mutate-m3", mutate_m3,
                     "Fixture: corrupt the m^3 variance term; the run must then fail");

    // --- sweep ---
    auto* sweep = app.add_subcommand("sweep", "Sample-complexity sweeps (CSV + optional SVG)");
    std::string sweep_family = "pm", sweep_ns, sweep_eps, sweep_policy = "paper", sweep_ms;
    std::string sweep_out, sweep_svg, sweep_axis = "eps";
    double sweep_param = 0.0, cal_b = 0.0;
    std::int64_t sweep_trials = 200;
    std::uint64_t sweep_seed = 0;
    bool sweep_has_seed = false, calibrate_c = false;
    sweep->add_option("--family", sweep_family, "Soundness family (default pm)");
    sweep->add_option("--param", sweep_param, "Family parameter (0: derived from eps)");
    sweep->add_option("--n", sweep_ns, "Comma-separated n grid")->required();
    sweep->add_option("--eps", sweep_eps, "Comma-separated eps grid")->required();
    sweep->add_option("--policy", sweep_policy, "m policy: paper|list|search");
    sweep->add_option("--m", sweep_ms, "Comma-separated m list (policy=list)");
    sweep->add_option("--trials", sweep_trials, "Trials per cell (>= 100)");
    sweep->add_option("--seed", sweep_seed, "Base seed (required)")
        ->each([&](const std::string&) { sweep_has_seed = true; });
    sweep->add_option("--out", sweep_out, "CSV output path")->required();
    sweep->add_option("--svg", sweep_svg, "Optional SVG plot path (m vs the chosen axis)");
    sweep->add_option("--axis", sweep_axis, "SVG x axis: eps or n")
        ->check(CLI::IsMember({"eps", "n"}));
    sweep->add_flag("--calibrate-c", calibrate_c,
                    "Estimate the smallest sufficient closeness constant instead");
    sweep->add_option("--b", cal_b, "l2^2-norm promise for --calibrate-c");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    if (unif->parsed()) {
        if (unif_src.input.empty() && unif_src.family.empty())
            throw std::runtime_error("test-uniformity: provide --input or --family");
        if (unif_src.input.empty() && !unif_has_seed)
            throw std::runtime_error("test-uniformity: --seed is required when sampling");
        std::int64_t m = unif_m;
        if (m == 0 && unif_src.input.empty()) m = required_samples_uniformity(unif_n, unif_eps);
        bool sampled = false;
        const Histogram h = resolve_histogram(unif_src, unif_n, m, unif_seed, &sampled);
        Verdict v = test_uniformity(h, unif_n, unif_eps);
        if (sampled) v.seed = unif_seed;
        print_verdict(v, format);
        return v.decision_no ? kExitNo : kExitYes;
    }

    if (close->parsed()) {
        const bool from_files = !close_src1.input.empty();
        if (from_files != !close_src2.input.empty())
            throw std::runtime_error("test-closeness: provide both inputs or both families");
        std::int64_t m = close_m;
        if (!from_files) {
            if (!close_has_seed)
                throw std::runtime_error("test-closeness: --seed is required when sampling");
            if (close_n < 2) throw std::runtime_error("test-closeness: --n is required when sampling");
            if (m == 0) {
                if (close_b <= 0.0)
                    throw std::runtime_error("test-closeness: provide --m or --b");
                m = required_samples_closeness(close_b, close_eps);
            }
        }
        bool sampled1 = false, sampled2 = false;
        std::int64_t n = close_n;
        Histogram hp, hq;
        if (from_files) {
            // Domain size from files: max element if --n was not given.
            if (n < 1) {
                // Two passes: read as large-domain, then shrink is pointless;
                // require --n for files too.
                throw std::runtime_error("test-closeness: --n is required");
            }
            hp = resolve_histogram(close_src1, n, 0, 0, &sampled1);
            hq = resolve_histogram(close_src2, n, 0, 0, &sampled2);
            if (hp.m != hq.m) throw std::runtime_error("test-closeness: sample counts differ");
        } else {
            hp = resolve_histogram(close_src1, n, m, derive_seed(close_seed, 0), &sampled1);
            hq = resolve_histogram(close_src2, n, m, derive_seed(close_seed, 1), &sampled2);
        }
        Verdict v = test_closeness(hp, hq, close_eps);
        if (sampled1) v.seed = close_seed;
        print_verdict(v, format);
        return v.decision_no ? kExitNo : kExitYes;
    }

    if (mom->parsed()) {
        const Distribution p = load_distribution(mom_p);
        nlohmann::json out;
        if (mom_q.empty()) {
            MomentReport r;
            r.expectation = expected_s(p, mom_m);
            r.variance_exact = exact_var_s(p, mom_m);
            r.variance_bound = var_bound_s(p, mom_m);
            r.terms["l2_norm_squared"] = p.l2_norm_squared();
            r.terms["l3_power_sum"] = p.power_sum(3);
            if (*r.variance_exact > r.variance_bound)
                throw std::logic_error("moments: exact variance exceeds its bound");
            out = to_json(r);
            out["statistic"] = "s";
        } else {
            const Distribution q = load_distribution(mom_q);
            const double b =
                mom_b > 0.0 ? mom_b : std::max(p.l2_norm_squared(), q.l2_norm_squared());
            MomentReport var_a = exact_var_a_terms(p, q, mom_m);
            MomentReport r;
            r.expectation = expected_z(p, q, mom_m);
            r.variance_bound = var_bound_z(p, q, mom_m, b);
            r.terms["var_a_exact"] = *var_a.variance_exact;
            r.terms["var_a_bound"] = var_bound_a(p, q, mom_m, b);
            r.terms["var_b_exact"] = exact_var_b(p, q, mom_m);
            r.terms["var_b_bound"] = var_bound_b(p, q, mom_m);
            r.terms["l2_distance_squared"] = l2_distance_squared(p, q);
            r.terms["b"] = b;
            if (r.terms["var_a_exact"] > r.terms["var_a_bound"] + 1e-9)
                throw std::logic_error("moments: exact Var[A] exceeds its bound");
            out = to_json(r);
            out["statistic"] = "Z";
        }
        std::cout << out.dump(2) << "\n";
        return kExitYes;
    }

    if (verify->parsed()) {
        if (verify_max_m < 2) throw std::runtime_error("verify-oracle: --max-m must be >= 2");
        GridOptions opts;
        opts.budget = verify_budget;
        opts.mutate_m3 = mutate_m3;
        opts.ms.clear();
        for (std::int64_t m = 2; m <= verify_max_m; ++m) opts.ms.push_back(m);
        const VerificationReport report = verify_oracle_grid(opts);
        std::printf("checked %lld instances\n",
                    static_cast<long long>(report.instances_checked));
        for (const auto& [formula, devv] : report.worst_deviation)
            std::printf("%-14s worst relative deviation %.3e\n", formula.c_str(), devv);
        for (const auto& [bound, count] : report.bound_violations)
            std::printf("%-14s violations %lld\n", bound.c_str(), static_cast<long long>(count));
        const bool ok = report.pass(opts.tolerance);
        std::printf("%s\n", ok ? "PASS" : "FAIL");
        return ok ? kExitYes : kExitNo;
    }

    if (sweep->parsed()) {
        if (!sweep_has_seed) throw std::runtime_error("sweep: --seed is required");
        if (calibrate_c) {
            const auto ns = parse_int_list(sweep_ns);
            const auto epss = parse_double_list(sweep_eps);
            if (ns.size() != 1 || epss.size() != 1)
                throw std::runtime_error("sweep --calibrate-c: single n and eps required");
            if (cal_b <= 0.0) throw std::runtime_error("sweep --calibrate-c: --b is required");
            const std::int64_t n = ns[0];
            const double eps = epss[0];
            const Distribution p = uniform_distribution(n);
            const double spike = eps * std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n));
            const Distribution q = make_family(FamilyKind::Spike, n, spike);
            const double c_star =
                calibrate_closeness_constant(p, q, eps, cal_b, sweep_trials, sweep_seed);
            nlohmann::json j{{"c_star", c_star},
                             {"m_star", required_samples_closeness(cal_b, eps, c_star)},
                             {"n", n},
                             {"eps", eps},
                             {"b", cal_b},
                             {"trials", sweep_trials},
                             {"seed", sweep_seed},
                             {"note", "informational calibration; the derived default stays 32768"}};
            std::ofstream out(sweep_out);
            if (!out) throw std::runtime_error("cannot write " + sweep_out);
            out << j.dump(2) << "\n";
            std::cout << j.dump(2) << "\n";
            return kExitYes;
        }

        SweepSpec spec;
        spec.family = sweep_family;
        spec.param = sweep_param;
        spec.ns = parse_int_list(sweep_ns);
        spec.epss = parse_double_list(sweep_eps);
        spec.policy = parse_m_policy(sweep_policy);
        if (!sweep_ms.empty()) spec.explicit_ms = parse_int_list(sweep_ms);
        spec.trials = sweep_trials;
        spec.base_seed = sweep_seed;
        spec.has_seed = true;
        validate(spec);

        const std::vector<SweepRow> rows = run_sweep(spec);
        std::ofstream out(sweep_out);
        if (!out) throw std::runtime_error("cannot write " + sweep_out);
        write_csv(out, rows);

        if (!sweep_svg.empty()) {
            std::vector<double> xs, ys;
            for (const auto& r : rows) {
                if (r.scenario.find("soundness") == std::string::npos) continue;
                xs.push_back(sweep_axis == "eps" ? r.eps : static_cast<double>(r.n));
                ys.push_back(static_cast<double>(r.m));
            }
            std::ofstream svg(sweep_svg);
            if (!svg) throw std::runtime_error("cannot write " + sweep_svg);
            write_svg_loglog(svg, xs, ys, sweep_axis == "eps" ? -2.0 : 0.5,
                             sweep_axis == "eps" ? "eps" : "n", "m");
        }
        return kExitYes;
    }

    return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
