#include "colltest/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace colltest {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Distribution load_distribution(const std::string& path) {
    const std::string text = read_file(path);
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::runtime_error("distribution file is empty: " + path);
    std::vector<double> weights;
    if (text[first] == '[') {
        const nlohmann::json j = nlohmann::json::parse(text);
        if (!j.is_array()) throw std::runtime_error("distribution JSON must be an array");
        for (const auto& v : j) weights.push_back(v.get<double>());
    } else {
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
            const std::size_t pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            weights.push_back(std::stod(line));
        }
    }
    return Distribution(std::move(weights));
}

SampleSet load_samples(const std::string& path, std::int64_t n) {
    const std::string text = read_file(path);
    SampleSet s;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        const long long v = std::stoll(line);
        if (v < 1 || v > n)
            throw std::runtime_error("sample file: element out of [1, n]: " + line);
        s.draws.push_back(static_cast<std::int32_t>(v - 1));
    }
    if (s.draws.empty()) throw std::runtime_error("sample file is empty: " + path);
    return s;
}

void save_samples(const std::string& path, const SampleSet& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (std::int32_t d : s.draws) out << (d + 1) << "\n";
}

nlohmann::json to_json(const Verdict& v) {
    nlohmann::json j{{"decision", v.decision_no ? "NO" : "YES"},
                     {"statistic", v.statistic},
                     {"threshold", v.threshold},
                     {"m", v.m},
                     {"n", v.n},
                     {"epsilon", v.epsilon}};
    if (v.seed) j["seed"] = *v.seed;
    return j;
}

nlohmann::json to_json(const MomentReport& r) {
    nlohmann::json j{{"expectation", r.expectation}, {"variance_bound", r.variance_bound}};
    if (r.variance_exact) j["variance_exact"] = *r.variance_exact;
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [k, v] : r.terms) terms[k] = v;
    j["terms"] = terms;
    return j;
}

nlohmann::json to_json(const ErrorRateEstimate& e) {
    return nlohmann::json{{"trials", e.trials}, {"failures", e.failures}, {"point", e.point},
                          {"lo", e.lo},         {"hi", e.hi},             {"base_seed", e.base_seed}};
}

std::string to_csv_row(const std::string& scenario_id, std::int64_t n, std::int64_t m, double eps,
                       const ErrorRateEstimate& e) {
    std::ostringstream os;
    os.precision(17);
    os << scenario_id << ',' << n << ',' << m << ',' << eps << ',' << e.trials << ','
       << e.failures << ',' << e.lo << ',' << e.hi << ',' << e.base_seed;
    return os.str();
}

}  // namespace colltest
