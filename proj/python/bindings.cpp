#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "chorgate/bpmn/parse.hpp"
#include "chorgate/conformance/validate.hpp"
#include "chorgate/core/model_json.hpp"
#include "chorgate/report/cli.hpp"
#include "chorgate/report/render.hpp"
#include "chorgate/requirements/document.hpp"
#include "chorgate/semantics/automaton.hpp"

namespace py = pybind11;
using namespace chorgate;

namespace {

struct ChorgateError : std::runtime_error {
    Diagnostics diagnostics;
    explicit ChorgateError(Diagnostics ds) : std::runtime_error(summary(ds)), diagnostics(std::move(ds)) {}

    static std::string summary(const Diagnostics& ds) {
        std::ostringstream os;
        for (std::size_t i = 0; i < ds.size(); ++i) os << (i ? "\n" : "") << format_diagnostic(ds[i], "");
        return os.str();
    }
};

template <typename T>
T unwrap(Result<T> r) {
    if (!r.ok()) throw ChorgateError(r.diagnostics());
    return std::move(r).value();
}

report::Format format_of(const std::string& name) {
    auto f = report::parse_format(name);
    if (!f) throw py::value_error("format must be text, json or csv");
    return *f;
}

py::object ratio_or_none(const std::optional<conformance::Ratio>& r) {
    if (!r) return py::none();
    return py::make_tuple(r->numerator, r->denominator);
}

}  // namespace

PYBIND11_MODULE(_chorgate, m) {
    m.doc() = "Requirements validation of BPMN choreographies against goal-model scenarios";

    static py::exception<ChorgateError> error_type(m, "ChorgateError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ChorgateError& e) {
            py::list diags;
            for (const auto& d : e.diagnostics) diags.append(py::cast(d));
            py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
            exc.attr("diagnostics") = diags;
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::enum_<Severity>(m, "Severity").value("error", Severity::error).value("warning", Severity::warning);

    py::class_<Diagnostic>(m, "Diagnostic")
        .def_readonly("severity", &Diagnostic::severity)
        .def_readonly("code", &Diagnostic::code)
        .def_readonly("origin", &Diagnostic::origin)
        .def_readonly("location", &Diagnostic::location)
        .def_readonly("line", &Diagnostic::line)
        .def_readonly("message", &Diagnostic::message)
        .def("__repr__", [](const Diagnostic& d) { return format_diagnostic(d, ""); });

    py::class_<MessageEvent>(m, "MessageEvent")
        .def(py::init<std::string, std::string, std::string>(), py::arg("message"), py::arg("sender"),
             py::arg("receiver"))
        .def_readonly("message", &MessageEvent::message)
        .def_readonly("sender", &MessageEvent::sender)
        .def_readonly("receiver", &MessageEvent::receiver)
        .def(py::self == py::self)
        .def(py::self < py::self)
        .def("__hash__", [](const MessageEvent& e) { return py::hash(py::make_tuple(e.message, e.sender, e.receiver)); })
        .def("__repr__", [](const MessageEvent& e) { return "MessageEvent(" + to_string(e) + ")"; });

    py::class_<ChoreographyModel>(m, "ChoreographyModel")
        .def_readonly("name", &ChoreographyModel::name)
        .def_readonly("participants", &ChoreographyModel::participants)
        .def_property_readonly("node_count", [](const ChoreographyModel& c) { return c.nodes.size(); })
        .def_property_readonly("flow_count", [](const ChoreographyModel& c) { return c.flows.size(); })
        .def_property_readonly("messages", [](const ChoreographyModel& c) {
            std::vector<MessageEvent> out;
            for (const auto& l : c.links) out.push_back(l.event());
            return out;
        })
        .def("to_json", [](const ChoreographyModel& c) { return choreography_to_json(c); });

    py::class_<requirements::RequirementsDoc>(m, "RequirementsDoc")
        .def_property_readonly("goals",
                               [](const requirements::RequirementsDoc& d) {
                                   std::vector<std::string> ids;
                                   for (const auto& g : d.goal_model.goals()) ids.push_back(g.id);
                                   return ids;
                               })
        .def_property_readonly("requirements",
                               [](const requirements::RequirementsDoc& d) { return requirements_of(d.goal_model); })
        .def_property_readonly("scenarios",
                               [](const requirements::RequirementsDoc& d) {
                                   std::vector<std::string> ids;
                                   for (const auto& s : d.scenarios) ids.push_back(s.id);
                                   return ids;
                               })
        .def("serialize", [](const requirements::RequirementsDoc& d) { return requirements::serialize_requirements(d); });

    py::class_<semantics::TraceAutomaton>(m, "TraceAutomaton")
        .def_property_readonly("state_count", &semantics::TraceAutomaton::state_count)
        .def("alphabet", &semantics::TraceAutomaton::alphabet)
        .def("accepts",
             [](const semantics::TraceAutomaton& a, const Trace& t) { return semantics::accepts(a, t); },
             py::arg("trace"))
        .def(
            "enumerate",
            [](const semantics::TraceAutomaton& a, std::size_t loop_bound, std::size_t max_trace_len,
               std::size_t max_traces) {
                auto r = semantics::enumerate_traces(a, {loop_bound, max_trace_len, max_traces});
                return py::make_tuple(r.traces, r.truncated);
            },
            py::arg("loop_bound") = 2, py::arg("max_trace_len") = 64, py::arg("max_traces") = 10000,
            "Returns (traces, truncated).");

    py::class_<conformance::ScenarioVerdict>(m, "ScenarioVerdict")
        .def_readonly("scenario", &conformance::ScenarioVerdict::scenario)
        .def_readonly("requirement", &conformance::ScenarioVerdict::requirement)
        .def_property_readonly("polarity",
                               [](const conformance::ScenarioVerdict& v) { return std::string(to_string(v.polarity)); })
        .def_readonly("realized", &conformance::ScenarioVerdict::realized)
        .def_property_readonly(
            "evidence_kind", [](const conformance::ScenarioVerdict& v) { return std::string(to_string(v.evidence_kind)); })
        .def_readonly("evidence", &conformance::ScenarioVerdict::evidence)
        .def_readonly("expansions", &conformance::ScenarioVerdict::expansions);

    py::class_<conformance::ValidationReport>(m, "ValidationReport")
        .def_readonly("model_name", &conformance::ValidationReport::model_name)
        .def_readonly("valid", &conformance::ValidationReport::valid)
        .def_readonly("verdicts", &conformance::ValidationReport::verdicts)
        .def_readonly("uncovered", &conformance::ValidationReport::uncovered)
        .def_readonly("truncated", &conformance::ValidationReport::truncated)
        .def_readonly("model_path_count", &conformance::ValidationReport::model_path_count)
        .def_readonly("diagnostics", &conformance::ValidationReport::diagnostics)
        .def_property_readonly("matrix",
                               [](const conformance::ValidationReport& r) {
                                   return py::make_tuple(r.matrix.tp, r.matrix.fn, r.matrix.fp, r.matrix.tn);
                               })
        .def(
            "render",
            [](const conformance::ValidationReport& r, const std::string& format) {
                return report::render(r, format_of(format));
            },
            py::arg("format") = "text");

    m.def(
        "parse_choreography",
        [](const std::string& text) { return unwrap(bpmn::parse_choreography(text)); }, py::arg("text"),
        "Parse a BPMN 2.0 choreography document; raises ChorgateError on defects.");
    m.def("validate_choreography", &validate_choreography, py::arg("model"));
    m.def(
        "parse_requirements",
        [](const std::string& text) { return unwrap(requirements::parse_requirements(text)); }, py::arg("text"));
    m.def("bind_participants", &requirements::bind_participants, py::arg("doc"), py::arg("model"));
    m.def(
        "compile", [](const ChoreographyModel& c) { return unwrap(semantics::compile(c)); }, py::arg("model"));
    m.def(
        "validate",
        [](const ChoreographyModel& c, const requirements::RequirementsDoc& d, std::size_t loop_bound,
           std::size_t max_trace_len, std::size_t max_traces, bool coverage) {
            conformance::ValidateOptions opt;
            opt.bounds = {loop_bound, max_trace_len, max_traces};
            opt.coverage = coverage;
            return unwrap(conformance::validate(c, d, opt));
        },
        py::arg("model"), py::arg("doc"), py::arg("loop_bound") = 2, py::arg("max_trace_len") = 64,
        py::arg("max_traces") = 10000, py::arg("coverage") = true);
    m.def(
        "compute_metrics",
        [](std::uint64_t tp, std::uint64_t fn, std::uint64_t fp, std::uint64_t tn) {
            const auto mt = conformance::compute_metrics(ConfusionMatrix{tp, fn, fp, tn});
            py::dict out;
            out["precision"] = ratio_or_none(mt.precision);
            out["recall"] = ratio_or_none(mt.recall);
            out["accuracy"] = ratio_or_none(mt.accuracy);
            out["percent"] = py::make_tuple(report::percent(mt.accuracy), report::percent(mt.precision),
                                            report::percent(mt.recall));
            return out;
        },
        py::arg("tp"), py::arg("fn"), py::arg("fp"), py::arg("tn"),
        "Exact (numerator, denominator) ratios, None when undefined, plus rendered accuracy/precision/recall.");
    m.def(
        "run",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "chorgate");
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
