#include "chorgate/conformance/validate.hpp"

#include <algorithm>
#include <set>

namespace chorgate::conformance {

namespace {

constexpr const char* kOrigin = "conformance";

using TraceSet = std::set<Trace, ShortlexLess>;

TraceSet expand_body(const std::vector<ScenarioElement>& body, std::size_t loop_bound);

TraceSet concat(const TraceSet& prefixes, const TraceSet& suffixes) {
    TraceSet out;
    for (const auto& p : prefixes) {
        for (const auto& s : suffixes) {
            Trace t = p;
            t.insert(t.end(), s.begin(), s.end());
            out.insert(std::move(t));
        }
    }
    return out;
}

TraceSet expand_loop(const Loop& loop, std::size_t loop_bound) {
    TraceSet out;
    const std::size_t hi = std::min(loop.max_reps, loop_bound);
    if (loop.min_reps > hi) return out;
    const TraceSet once = expand_body(loop.body, loop_bound);
    TraceSet k_fold{Trace{}};
    for (std::size_t k = 0; k <= hi; ++k) {
        if (k >= loop.min_reps) out.insert(k_fold.begin(), k_fold.end());
        if (k < hi) k_fold = concat(k_fold, once);
    }
    return out;
}

TraceSet expand_body(const std::vector<ScenarioElement>& body, std::size_t loop_bound) {
    TraceSet acc{Trace{}};
    for (const auto& el : body) {
        if (const auto* e = std::get_if<MessageEvent>(&el.node)) {
            TraceSet next;
            for (auto t : acc) {
                t.push_back(*e);
                next.insert(std::move(t));
            }
            acc = std::move(next);
        } else {
            acc = concat(acc, expand_loop(std::get<Loop>(el.node), loop_bound));
        }
        if (acc.empty()) break;
    }
    return acc;
}

}  // namespace

const char* to_string(EvidenceKind k) {
    switch (k) {
        case EvidenceKind::none: return "none";
        case EvidenceKind::witness: return "witness";
        case EvidenceKind::rejected_expansion: return "rejected_expansion";
        case EvidenceKind::counterexample: return "counterexample";
    }
    return "none";
}

std::vector<Trace> expand_scenario(const Scenario& s, std::size_t loop_bound) {
    auto set = expand_body(s.body, loop_bound);
    return {set.begin(), set.end()};
}

Result<ScenarioVerdict> check_scenario(const semantics::TraceAutomaton& automaton, const Scenario& s,
                                       std::size_t loop_bound) {
    const auto expansions = expand_scenario(s, loop_bound);
    if (expansions.empty()) {
        return Result<ScenarioVerdict>::failure({make_error(
            kOrigin, "EmptyExpansion", "scenario '" + s.id + "'",
            "scenario '" + s.id + "' has no expansion at loop bound " + std::to_string(loop_bound) +
                " (a loop requires more repetitions than the bound allows)")});
    }

    ScenarioVerdict v{s.id, s.requirement, s.polarity, false, EvidenceKind::none, {}, expansions.size()};
    if (s.polarity == Polarity::expected_valid) {
        auto rejected = std::find_if(expansions.begin(), expansions.end(),
                                     [&](const Trace& t) { return !semantics::accepts(automaton, t); });
        v.realized = rejected == expansions.end();
        v.evidence_kind = v.realized ? EvidenceKind::witness : EvidenceKind::rejected_expansion;
        v.evidence = v.realized ? expansions.front() : *rejected;
    } else {
        auto accepted = std::find_if(expansions.begin(), expansions.end(),
                                     [&](const Trace& t) { return semantics::accepts(automaton, t); });
        v.realized = accepted != expansions.end();
        if (v.realized) {
            v.evidence_kind = EvidenceKind::counterexample;
            v.evidence = *accepted;
        }
    }
    return Result<ScenarioVerdict>::success(std::move(v));
}

ConfusionMatrix classify(std::span<const ScenarioVerdict> verdicts) {
    ConfusionMatrix m;
    for (const auto& v : verdicts) {
        if (v.polarity == Polarity::expected_valid) {
            ++(v.realized ? m.tp : m.fn);
        } else {
            ++(v.realized ? m.fp : m.tn);
        }
    }
    return m;
}

Metrics compute_metrics(const ConfusionMatrix& m) {
    auto ratio = [](std::uint64_t num, std::uint64_t den) -> std::optional<Ratio> {
        if (den == 0) return std::nullopt;
        return Ratio{num, den};
    };
    return Metrics{ratio(m.tp, m.tp + m.fp), ratio(m.tp, m.tp + m.fn), ratio(m.tp + m.tn, m.total())};
}

Coverage coverage_check(const semantics::TraceAutomaton& automaton, std::span<const Scenario> scenarios,
                        const semantics::EnumerationBounds& bounds) {
    auto paths = semantics::enumerate_traces(automaton, bounds);
    TraceSet covered;
    for (const auto& s : scenarios) {
        if (s.polarity != Polarity::expected_valid) continue;
        for (auto& t : expand_scenario(s, bounds.loop_bound)) covered.insert(std::move(t));
    }
    Coverage out;
    out.truncated = paths.truncated;
    out.model_path_count = paths.traces.size();
    for (auto& t : paths.traces) {
        if (!covered.contains(t)) out.uncovered.push_back(std::move(t));
    }
    return out;
}

Result<ValidationReport> validate(const ChoreographyModel& model, const requirements::RequirementsDoc& doc,
                                  const ValidateOptions& options) {
    auto automaton = semantics::compile(model);
    if (!automaton) return Result<ValidationReport>::failure(automaton.diagnostics());

    ValidationReport report;
    report.model_name = model.name;
    report.requirement_count = requirements_of(doc.goal_model).size();
    report.bounds = options.bounds;
    report.coverage_checked = options.coverage;

    Diagnostics errors;
    for (const auto& s : doc.scenarios) {
        auto verdict = check_scenario(automaton.value(), s, options.bounds.loop_bound);
        if (!verdict) {
            errors.insert(errors.end(), verdict.diagnostics().begin(), verdict.diagnostics().end());
            continue;
        }
        report.verdicts.push_back(std::move(verdict).value());
    }
    if (!errors.empty()) return Result<ValidationReport>::failure(std::move(errors));

    report.matrix = classify(report.verdicts);
    report.metrics = compute_metrics(report.matrix);

    if (options.coverage) {
        auto cov = coverage_check(automaton.value(), doc.scenarios, options.bounds);
        report.uncovered = std::move(cov.uncovered);
        report.truncated = cov.truncated;
        report.model_path_count = cov.model_path_count;
        if (report.truncated) {
            report.diagnostics.push_back(make_warning(
                kOrigin, "EnumerationTruncated", model.name,
                "path enumeration hit max_trace_len or max_traces; the extra-path check is bound-limited "
                "and the model is reported invalid"));
        }
    }

    report.valid = report.matrix.fn == 0 && report.matrix.fp == 0 && report.uncovered.empty() && !report.truncated;
    return Result<ValidationReport>::success(std::move(report));
}

}  // namespace chorgate::conformance
