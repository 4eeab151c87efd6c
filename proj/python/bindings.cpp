#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ivhs/lab.hpp"

namespace py = pybind11;

namespace {

ivhs::RunResult run_toml(const std::string& text) {
    ivhs::Scenario sc = ivhs::parse_scenario(text);
    return ivhs::run_scenario(sc);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact IVHS stratification laboratory on smooth plane curves";

    py::register_exception<ivhs::ParseError>(m, "ScenarioParseError", PyExc_ValueError);

    m.def("version", [] { return std::string(ivhs::kToolVersion); });

    m.def(
        "run_scenario",
        [](const std::string& toml_text) {
            auto result = run_toml(toml_text);
            return py::make_tuple(result.exit_code, result.report.dump(2));
        },
        py::arg("toml_text"),
        "Execute a TOML scenario; returns (exit_code, json_report).");

    m.def(
        "curve_info",
        [](const std::string& field, const std::string& curve) {
            ivhs::Scenario sc;
            sc.field_spec = field;
            sc.curve = curve;
            sc.tasks = {"info"};
            return ivhs::run_scenario(sc).report.dump(2);
        },
        py::arg("field") = "Fp:101", py::arg("curve") = "x^6 + y^6 + z^6",
        "Curve facts (degree, genus, pluricanonical dimensions, dim I_C(2)) as JSON.");

    m.def(
        "sym_mult_rank",
        [](const std::string& field, const std::string& curve, int mpow) {
            if (field.rfind("Fp:", 0) != 0) throw ivhs::ParseError("sym_mult_rank expects Fp:<prime>");
            ivhs::FpField F(std::stoull(field.substr(3)));
            auto C = ivhs::build_curve(F, ivhs::parse_poly(F, curve));
            return ivhs::rref(ivhs::sym_mult_matrix(C, mpow)).rank;
        },
        py::arg("field"), py::arg("curve"), py::arg("m"),
        "Rank of the multiplication map S^m H^0(K) -> H^0(mK).");

    m.def(
        "survey",
        [](const std::string& field, const std::string& curve, int samples, std::uint64_t seed) {
            ivhs::Scenario sc;
            sc.field_spec = field;
            sc.curve = curve;
            sc.seed = seed;
            sc.tasks = {"survey"};
            sc.survey_samples = samples;
            return ivhs::run_scenario(sc).report.dump(2);
        },
        py::arg("field"), py::arg("curve"), py::arg("samples") = 3, py::arg("seed") = 1,
        "Sample rank strata and tabulate filtration invariants; returns JSON.");

    m.def(
        "search",
        [](const std::string& field, const std::string& curve, int budget, std::uint64_t seed) {
            ivhs::Scenario sc;
            sc.field_spec = field;
            sc.curve = curve;
            sc.seed = seed;
            sc.tasks = {"search"};
            sc.search_budget = budget;
            return ivhs::run_scenario(sc).report.dump(2);
        },
        py::arg("field"), py::arg("curve"), py::arg("budget") = 10, py::arg("seed") = 1,
        "Search for classes with filtration length >= 2; returns JSON findings.");

    m.def(
        "selftest",
        [](std::uint64_t prime, std::uint64_t seed) {
            auto outcome = ivhs::selftest_with_determinism(prime, seed);
            return py::make_tuple(outcome.all_passed, outcome.report.dump(2));
        },
        py::arg("prime") = 101, py::arg("seed") = 20250810,
        "Run the full invariant battery; returns (all_passed, json_report).");

    m.def(
        "lined_sextic_polynomial",
        [](std::uint64_t prime, std::uint64_t seed) {
            ivhs::FpField F(prime);
            return ivhs::lined_sextic(F, seed).poly.str();
        },
        py::arg("prime") = 101, py::arg("seed") = 7,
        "A smooth sextic with six marked rational points on the line z = 0.");
}
