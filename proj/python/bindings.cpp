#include "spmdlens/clustering.hpp"
#include "spmdlens/error.hpp"
#include "spmdlens/pipeline.hpp"
#include "spmdlens/synth.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace spmdlens;

namespace {

std::vector<PerfVector> as_vectors(const std::vector<std::vector<double>>& rows)
{
    std::vector<PerfVector> out;
    for (std::size_t r = 0; r < rows.size(); ++r)
        out.push_back(PerfVector{r, rows[r]});
    return out;
}

AnalysisConfig config(double threshold_fraction, int count_threshold)
{
    AnalysisConfig c;
    c.density = DensityParams{threshold_fraction, count_threshold};
    c.validate();
    return c;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "SPMD performance bottleneck analysis";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<AnalysisError>(m, "AnalysisError", base.ptr());

    m.def(
        "analyze_json",
        [](const std::string& document, double threshold_fraction, int count_threshold) {
            return result_to_json(analyze(ingest_profile(document), config(threshold_fraction, count_threshold)));
        },
        py::arg("document"), py::arg("threshold_fraction") = 0.10, py::arg("count_threshold") = 2,
        "Analyze a profile document and return the result document.");

    m.def(
        "report",
        [](const std::string& document, double threshold_fraction, int count_threshold) {
            return render_report(analyze(ingest_profile(document), config(threshold_fraction, count_threshold)));
        },
        py::arg("document"), py::arg("threshold_fraction") = 0.10, py::arg("count_threshold") = 2);

    m.def(
        "density_cluster",
        [](const std::vector<std::vector<double>>& rows, double threshold_fraction, int count_threshold) {
            return density_cluster(as_vectors(rows), DensityParams{threshold_fraction, count_threshold}).clusters();
        },
        py::arg("vectors"), py::arg("threshold_fraction") = 0.10, py::arg("count_threshold") = 2,
        "Partition of row indices, canonical order.");

    m.def(
        "dissimilarity_severity",
        [](const std::vector<std::vector<double>>& rows) { return dissimilarity_severity(as_vectors(rows)).value; },
        py::arg("vectors"));

    m.def(
        "severity_classify",
        [](const std::vector<double>& values) {
            std::vector<std::string> out;
            for (auto c : severity_classify(values))
                out.emplace_back(to_string(c));
            return out;
        },
        py::arg("values"));

    m.def(
        "generate",
        [](const std::string& spec, std::uint64_t seed) { return emit_fixture(generate(parse_synth_spec(spec), seed)); },
        py::arg("spec"), py::arg("seed"), "Synthesize a profile document from a spec document.");
}
