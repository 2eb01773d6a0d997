#include "kd/cli.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

// (exit status, JSON report)
std::pair<int, std::string> run(const std::string& command, const std::string& path, std::optional<std::string> text,
                                 const std::string& field, int cutoff, std::optional<std::string> polarity,
                                 bool emit_matrices, const std::string& format)
{
    kd::JobConfig c;
    c.command = command;
    c.input = path;
    c.input_text = std::move(text);
    c.field = field;
    c.cutoff = cutoff;
    c.polarity = std::move(polarity);
    c.emit_matrices = emit_matrices;
    kd::JobResult r;
    {
        py::gil_scoped_release release;
        r = kd::run_job(c);
    }
    return {static_cast<int>(r.status), kd::render(r, format)};
}

}  // namespace

PYBIND11_MODULE(_kdual, m)
{
    m.doc() = "Certified computations with DG algebras over prime fields";
    m.attr("REPORT_SCHEMA") = kd::kReportSchema;
    m.def("commands", &kd::cli_commands);
    m.def("run", &run, py::arg("command"), py::arg("path") = "", py::arg("text") = py::none(),
          py::arg("field") = "gf:101", py::arg("cutoff") = 10, py::arg("polarity") = py::none(),
          py::arg("emit_matrices") = false, py::arg("format") = "json");
}
