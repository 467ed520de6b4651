#include "chorgate/report/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "chorgate/bpmn/parse.hpp"
#include "chorgate/conformance/validate.hpp"
#include "chorgate/report/render.hpp"
#include "chorgate/requirements/document.hpp"

namespace chorgate::cli {

namespace {

struct CliConfig {
    std::string model_path;
    std::string requirements_path;
    std::size_t loop_bound = 2;
    std::size_t max_trace_len = 64;
    std::size_t max_traces = 10000;
    std::string format = "text";
    bool no_coverage = false;
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("error[FileNotFound] " + path + ": cannot open file for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print(std::ostream& err, const Diagnostics& diags, const std::string& source) {
    for (const auto& d : diags) err << format_diagnostic(d, source) << '\n';
}

template <class T>
const T* load(const Result<T>& r, const std::string& source, std::ostream& err) {
    print(err, r.diagnostics(), source);
    return r ? &r.value() : nullptr;
}

void add_bounds(CLI::App* cmd, CliConfig& cfg) {
    cmd->add_option("--loop-bound", cfg.loop_bound, "Traversals of any one sequence flow per path")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--max-trace-len", cfg.max_trace_len, "Event-count cap for enumerated paths")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--max-traces", cfg.max_traces, "Cap on the number of enumerated paths")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

void add_format(CLI::App* cmd, CliConfig& cfg) {
    cmd->add_option("--format", cfg.format, "Output format (default from CHORGATE_FORMAT, else text)")
        ->envname("CHORGATE_FORMAT")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
}

semantics::EnumerationBounds bounds_of(const CliConfig& cfg) {
    return {cfg.loop_bound, cfg.max_trace_len, cfg.max_traces};
}

int run_validate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model_text = read_file(cfg.model_path);
    const auto req_text = read_file(cfg.requirements_path);

    const auto model_result = bpmn::parse_choreography(model_text);
    const auto req_result = requirements::parse_requirements(req_text);
    const auto* model = load(model_result, cfg.model_path, err);
    const auto* doc = load(req_result, cfg.requirements_path, err);
    if (model == nullptr || doc == nullptr) return kInputError;

    if (auto unbound = requirements::bind_participants(*doc, *model); !unbound.empty()) {
        print(err, unbound, cfg.requirements_path);
        return kInputError;
    }

    conformance::ValidateOptions options{bounds_of(cfg), !cfg.no_coverage};
    const auto report = conformance::validate(*model, *doc, options);
    if (!report) {
        print(err, report.diagnostics(), cfg.model_path);
        return kInputError;
    }
    print(err, report.value().diagnostics, cfg.model_path);
    out << report::render(report.value(), *report::parse_format(cfg.format));
    return report.value().valid ? kValid : kInvalid;
}

int run_paths(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto parsed = bpmn::parse_choreography(read_file(cfg.model_path));
    const auto* model = load(parsed, cfg.model_path, err);
    if (model == nullptr) return kInputError;
    const auto automaton = semantics::compile(*model);
    if (!automaton) {
        print(err, automaton.diagnostics(), cfg.model_path);
        return kInputError;
    }
    const auto paths = semantics::enumerate_traces(automaton.value(), bounds_of(cfg));
    if (paths.truncated) {
        print(err,
              {make_warning("semantics", "EnumerationTruncated", model->name,
                            "path enumeration hit max_trace_len or max_traces; the listing is incomplete")},
              cfg.model_path);
    }
    out << report::render_paths(model->name, paths, *report::parse_format(cfg.format));
    return kValid;
}

int run_lint(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model_text = read_file(cfg.model_path);
    const std::string req_text = cfg.requirements_path.empty() ? std::string() : read_file(cfg.requirements_path);

    bool clean = true;
    const auto model_result = bpmn::parse_choreography(model_text);
    const auto* model = load(model_result, cfg.model_path, err);
    if (model == nullptr) {
        clean = false;
    } else {
        out << cfg.model_path << ": ok, choreography '" << model->name << "' with "
            << model->participants.size() << " participants, " << model->nodes.size() << " nodes, "
            << model->flows.size() << " flows, " << model->links.size() << " message links\n";
        if (auto automaton = semantics::compile(*model); !automaton) {
            print(err, automaton.diagnostics(), cfg.model_path);
            clean = false;
        }
    }

    if (!cfg.requirements_path.empty()) {
        const auto req_result = requirements::parse_requirements(req_text);
        const auto* doc = load(req_result, cfg.requirements_path, err);
        if (doc == nullptr) {
            clean = false;
        } else {
            out << cfg.requirements_path << ": ok, " << doc->goal_model.goals().size() << " goals, "
                << requirements_of(doc->goal_model).size() << " requirements, " << doc->scenarios.size()
                << " scenarios\n";
            if (model != nullptr) {
                auto unbound = requirements::bind_participants(*doc, *model);
                print(err, unbound, cfg.requirements_path);
                clean = clean && unbound.empty();
            }
        }
    }
    return clean ? kValid : kInvalid;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Validates BPMN 2.0 choreography models against goal-model requirements", "chorgate"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "chorgate 0.1.0");

    CliConfig cfg;
    auto* validate = app.add_subcommand("validate", "Check a model against requirement scenarios");
    validate->add_option("model", cfg.model_path, "BPMN 2.0 choreography document")->required();
    validate->add_option("requirements", cfg.requirements_path, "Requirements document (JSON)")->required();
    add_bounds(validate, cfg);
    add_format(validate, cfg);
    validate->add_flag("--no-coverage", cfg.no_coverage, "Skip the extra-path check");

    auto* paths = app.add_subcommand("paths", "Enumerate the message traces of a model");
    paths->add_option("model", cfg.model_path, "BPMN 2.0 choreography document")->required();
    add_bounds(paths, cfg);
    add_format(paths, cfg);

    auto* lint = app.add_subcommand("lint", "Check well-formedness of a model and optional requirements");
    lint->add_option("model", cfg.model_path, "BPMN 2.0 choreography document")->required();
    lint->add_option("requirements", cfg.requirements_path, "Requirements document (JSON)");

    std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kValid;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kValid;
    } catch (const CLI::CallForVersion&) {
        out << "chorgate 0.1.0\n";
        return kValid;
    } catch (const CLI::ParseError& e) {
        err << "error[Usage] " << e.what() << '\n';
        for (const auto* sub : app.get_subcommands()) {
            err << sub->help();
            break;
        }
        return kInputError;
    }

    try {
        if (validate->parsed()) return run_validate(cfg, out, err);
        if (paths->parsed()) return run_paths(cfg, out, err);
        return run_lint(cfg, out, err);
    } catch (const InputError& e) {
        err << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error[InternalError] " << e.what() << '\n';
    }
    return kInputError;
}

}  // namespace chorgate::cli
