// Python bindings for the core operations: distributions, sampling,
// collision statistics, closed-form moments, testers, and the Monte Carlo
// error-rate harness.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "colltest/distribution.hpp"
#include "colltest/montecarlo.hpp"
#include "colltest/oracle.hpp"
#include "colltest/testers.hpp"
#include "colltest/verification.hpp"

namespace py = pybind11;
using namespace colltest;

PYBIND11_MODULE(_colltest, m) {
    m.doc() = "Collision-based uniformity and l2 closeness testing";

    py::class_<Distribution>(m, "Distribution")
        .def(py::init<std::vector<double>>(), py::arg("weights"))
        .def_property_readonly("n", &Distribution::domain_size)
        .def_property_readonly("probs", &Distribution::probs)
        .def("power_sum", &Distribution::power_sum, py::arg("r"))
        .def("lr_norm", &Distribution::lr_norm, py::arg("r"))
        .def("l2_norm_squared", &Distribution::l2_norm_squared);

    py::class_<Histogram>(m, "Histogram")
        .def_readonly("counts", &Histogram::counts)
        .def_readonly("m", &Histogram::m);

    py::class_<SampleSet>(m, "SampleSet")
        .def_readonly("draws", &SampleSet::draws)
        .def_readonly("seed", &SampleSet::seed);

    py::class_<Verdict>(m, "Verdict")
        .def_property_readonly("decision", [](const Verdict& v) { return v.decision_no ? "NO" : "YES"; })
        .def_readonly("statistic", &Verdict::statistic)
        .def_readonly("threshold", &Verdict::threshold)
        .def_readonly("m", &Verdict::m)
        .def_readonly("n", &Verdict::n)
        .def_readonly("epsilon", &Verdict::epsilon);

    py::class_<ErrorRateEstimate>(m, "ErrorRateEstimate")
        .def_readonly("trials", &ErrorRateEstimate::trials)
        .def_readonly("failures", &ErrorRateEstimate::failures)
        .def_readonly("point", &ErrorRateEstimate::point)
        .def_readonly("lo", &ErrorRateEstimate::lo)
        .def_readonly("hi", &ErrorRateEstimate::hi);

    m.def("l2_distance_squared", &l2_distance_squared);
    m.def("l1_distance", &l1_distance);
    m.def("make_family",
          py::overload_cast<const std::string&, std::int64_t, double>(&make_family),
          py::arg("kind"), py::arg("n"), py::arg("param") = 0.0);
    m.def("uniform_distribution", &uniform_distribution, py::arg("n"));
    m.def("sample", py::overload_cast<const Distribution&, std::int64_t, std::uint64_t>(&sample),
          py::arg("d"), py::arg("m"), py::arg("seed"));
    m.def("histogram", &histogram, py::arg("samples"), py::arg("n"));
    m.def("histogram_from_counts", &histogram_from_counts, py::arg("counts"));

    m.def("self_collisions", &self_collisions);
    m.def("cross_collisions", &cross_collisions);
    m.def("closeness_statistic", &closeness_statistic);
    m.def("expected_s", &expected_s);
    m.def("exact_var_s", &exact_var_s);
    m.def("var_bound_s", &var_bound_s);
    m.def("expected_z", &expected_z);
    m.def("var_bound_a", &var_bound_a);
    m.def("var_bound_z", &var_bound_z);
    m.def("exact_var_a", [](const Distribution& p, const Distribution& q, std::int64_t mm) {
        return *exact_var_a_terms(p, q, mm).variance_exact;
    });
    m.def("estimate_l2_norm_squared", &estimate_l2_norm_squared);

    m.def("required_samples_uniformity", &required_samples_uniformity, py::arg("n"),
          py::arg("eps"), py::arg("constant") = kUniformityConstant);
    m.def("uniformity_threshold", &uniformity_threshold);
    m.def("test_uniformity", &test_uniformity, py::arg("h"), py::arg("n"), py::arg("eps"));
    m.def("required_samples_closeness", &required_samples_closeness, py::arg("b"), py::arg("eps"),
          py::arg("constant") = kClosenessConstant);
    m.def("closeness_threshold", &closeness_threshold);
    m.def("test_closeness", &test_closeness, py::arg("hp"), py::arg("hq"), py::arg("eps"));
    m.def("chi_squared_statistic", &chi_squared_statistic);
    m.def("poissonized_collision_trial",
          py::overload_cast<const Distribution&, double, std::uint64_t>(&poissonized_collision_trial),
          py::arg("p"), py::arg("rate"), py::arg("seed"));

    m.def("wilson_interval", &wilson_interval, py::arg("successes"), py::arg("trials"),
          py::arg("z") = kWilson99Z);
    m.def(
        "estimate_uniformity_error_rate",
        [](const Distribution& p, const std::string& side, std::int64_t n, double eps,
           std::int64_t mm, std::int64_t trials, std::uint64_t seed) {
            UniformityScenario sc{p, side == "completeness" ? Side::Completeness : Side::Soundness,
                                  n, eps, mm, side};
            return estimate_error_rate(sc, trials, seed);
        },
        py::arg("p"), py::arg("side"), py::arg("n"), py::arg("eps"), py::arg("m"),
        py::arg("trials"), py::arg("seed"));

    m.def("enumerate_moments_s", [](const Distribution& p, std::int64_t mm) {
        const ExactMoments em = enumerate_moments_s(p, mm);
        return py::make_tuple(em.mean, em.variance);
    });
}
