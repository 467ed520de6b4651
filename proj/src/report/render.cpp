#include "chorgate/report/render.hpp"

#include <json.hpp>

#include <sstream>

namespace chorgate::report {

namespace {

using json = nlohmann::ordered_json;
using conformance::Ratio;

constexpr std::size_t kTextWitnessLimit = 10;

json event_json(const MessageEvent& e) {
    return {{"message", e.message}, {"from", e.sender}, {"to", e.receiver}};
}

json trace_json(const Trace& t) {
    json out = json::array();
    for (const auto& e : t) out.push_back(event_json(e));
    return out;
}

json ratio_json(const std::optional<Ratio>& r) {
    if (!r) return nullptr;
    return {{"numerator", r->numerator}, {"denominator", r->denominator}, {"percent", r->percent()}};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

const char* outcome(const conformance::ScenarioVerdict& v) {
    if (v.polarity == Polarity::expected_valid) return v.realized ? "TP" : "FN";
    return v.realized ? "FP" : "TN";
}

std::string render_json(const conformance::ValidationReport& r) {
    json j;
    j["model"] = r.model_name;
    j["overall"] = r.valid ? "valid" : "invalid";
    j["bounds"] = {{"loop_bound", r.bounds.loop_bound},
                   {"max_trace_len", r.bounds.max_trace_len},
                   {"max_traces", r.bounds.max_traces}};
    j["requirements"] = r.requirement_count;
    j["verdicts"] = json::array();
    for (const auto& v : r.verdicts) {
        json jv{{"scenario", v.scenario},
                {"requirement", v.requirement},
                {"polarity", to_string(v.polarity)},
                {"realized", v.realized},
                {"outcome", outcome(v)},
                {"expansions", v.expansions}};
        jv["evidence"] = v.evidence_kind == conformance::EvidenceKind::none
                             ? json(nullptr)
                             : json{{"kind", to_string(v.evidence_kind)}, {"trace", trace_json(v.evidence)}};
        j["verdicts"].push_back(std::move(jv));
    }
    j["matrix"] = {{"tp", r.matrix.tp}, {"fn", r.matrix.fn}, {"fp", r.matrix.fp}, {"tn", r.matrix.tn}};
    j["metrics"] = {{"precision", ratio_json(r.metrics.precision)},
                    {"recall", ratio_json(r.metrics.recall)},
                    {"accuracy", ratio_json(r.metrics.accuracy)}};
    json cov;
    cov["checked"] = r.coverage_checked;
    cov["model_paths"] = r.model_path_count;
    cov["truncated"] = r.truncated;
    cov["uncovered"] = json::array();
    for (const auto& t : r.uncovered) cov["uncovered"].push_back(trace_json(t));
    j["coverage"] = std::move(cov);
    j["diagnostics"] = json::array();
    for (const auto& d : r.diagnostics) {
        j["diagnostics"].push_back({{"severity", d.is_error() ? "error" : "warning"},
                                    {"code", d.code},
                                    {"origin", d.origin},
                                    {"location", d.location},
                                    {"message", d.message}});
    }
    return j.dump(2) + "\n";
}

std::string render_text(const conformance::ValidationReport& r) {
    std::ostringstream os;
    os << "Model:    " << r.model_name << '\n';
    os << "Overall:  " << (r.valid ? "VALID" : "INVALID");
    if (r.truncated) os << " (bound-limited: path enumeration truncated)";
    os << '\n';
    os << "Bounds:   loop " << r.bounds.loop_bound << ", trace length " << r.bounds.max_trace_len << ", traces "
       << r.bounds.max_traces << "\n\n";

    os << "Scenarios (" << r.verdicts.size() << "):\n";
    for (const auto& v : r.verdicts) {
        os << "  [" << outcome(v) << "] " << v.scenario << " (" << v.requirement << ", expected "
           << to_string(v.polarity) << "): " << (v.realized ? "realized" : "not realized") << '\n';
        switch (v.evidence_kind) {
            case conformance::EvidenceKind::rejected_expansion:
                os << "       rejected expansion: " << to_string(v.evidence) << '\n';
                break;
            case conformance::EvidenceKind::counterexample:
                os << "       accepted by model:  " << to_string(v.evidence) << '\n';
                break;
            default:
                break;
        }
    }
    os << '\n';
    os << "Confusion matrix: TP=" << r.matrix.tp << " FN=" << r.matrix.fn << " FP=" << r.matrix.fp
       << " TN=" << r.matrix.tn << '\n';
    os << "Accuracy " << percent(r.metrics.accuracy) << ", precision " << percent(r.metrics.precision)
       << ", recall " << percent(r.metrics.recall) << "\n\n";

    if (!r.coverage_checked) {
        os << "Extra paths: not checked\n";
    } else if (r.uncovered.empty()) {
        os << "Extra paths: none (" << r.model_path_count << " model paths, all covered)\n";
    } else {
        os << "Extra paths: " << r.uncovered.size() << " of " << r.model_path_count
           << " model paths match no valid scenario\n";
        for (std::size_t i = 0; i < r.uncovered.size() && i < kTextWitnessLimit; ++i) {
            os << "  " << to_string(r.uncovered[i]) << '\n';
        }
        if (r.uncovered.size() > kTextWitnessLimit) {
            os << "  ... " << (r.uncovered.size() - kTextWitnessLimit) << " more\n";
        }
    }
    return os.str();
}

std::string render_csv(const conformance::ValidationReport& r) {
    std::size_t valid = 0;
    for (const auto& v : r.verdicts) valid += v.polarity == Polarity::expected_valid ? 1 : 0;
    std::ostringstream os;
    os << csv_field(r.model_name) << ',' << r.requirement_count << ',' << valid << ','
       << (r.verdicts.size() - valid) << ',' << r.matrix.tp << ',' << r.matrix.fn << ',' << r.matrix.fp << ','
       << r.matrix.tn << ',' << percent(r.metrics.accuracy) << ',' << percent(r.metrics.precision) << ','
       << percent(r.metrics.recall) << '\n';
    return os.str();
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\n' && c != '\r') {
            fields.back() += c;
        }
    }
    return fields;
}

}  // namespace

std::optional<Format> parse_format(std::string_view name) {
    if (name == "text") return Format::text;
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    return std::nullopt;
}

std::string percent(const std::optional<Ratio>& r) {
    return r ? std::to_string(r->percent()) + "%" : std::string("N/A");
}

std::string csv_header() {
    return "process,requirements,valid_scenarios,invalid_scenarios,tp,fn,fp,tn,accuracy,precision,recall";
}

std::string render(const conformance::ValidationReport& report, Format format) {
    switch (format) {
        case Format::json: return render_json(report);
        case Format::csv: return render_csv(report);
        case Format::text: break;
    }
    return render_text(report);
}

std::string render_paths(const std::string& model_name, const semantics::EnumerationResult& paths,
                         Format format) {
    std::ostringstream os;
    if (format == Format::json) {
        json j;
        j["model"] = model_name;
        j["truncated"] = paths.truncated;
        j["paths"] = json::array();
        for (const auto& t : paths.traces) j["paths"].push_back(trace_json(t));
        return j.dump(2) + "\n";
    }
    if (format == Format::csv) {
        for (std::size_t i = 0; i < paths.traces.size(); ++i) {
            std::string events;
            for (const auto& e : paths.traces[i]) events += (events.empty() ? "" : ";") + to_string(e);
            os << (i + 1) << ',' << paths.traces[i].size() << ',' << csv_field(events) << '\n';
        }
        return os.str();
    }
    os << "Model " << model_name << ": " << paths.traces.size() << " path(s)"
       << (paths.truncated ? " (truncated)" : "") << '\n';
    for (std::size_t i = 0; i < paths.traces.size(); ++i) {
        os << "  " << (i + 1) << ". " << to_string(paths.traces[i]) << '\n';
    }
    return os.str();
}

std::optional<CsvRow> parse_csv_row(std::string_view line) {
    const auto f = split_csv(line);
    if (f.size() != 11) return std::nullopt;
    try {
        CsvRow row;
        row.process = f[0];
        row.requirements = std::stoull(f[1]);
        row.valid_scenarios = std::stoull(f[2]);
        row.invalid_scenarios = std::stoull(f[3]);
        row.matrix = ConfusionMatrix{std::stoull(f[4]), std::stoull(f[5]), std::stoull(f[6]), std::stoull(f[7])};
        row.accuracy = f[8];
        row.precision = f[9];
        row.recall = f[10];
        return row;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace chorgate::report
