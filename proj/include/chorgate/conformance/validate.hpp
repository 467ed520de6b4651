#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chorgate/core/choreography.hpp"
#include "chorgate/core/confusion_matrix.hpp"
#include "chorgate/core/diagnostic.hpp"
#include "chorgate/core/scenario.hpp"
#include "chorgate/requirements/document.hpp"
#include "chorgate/semantics/automaton.hpp"

namespace chorgate::conformance {

enum class EvidenceKind { none, witness, rejected_expansion, counterexample };

const char* to_string(EvidenceKind k);

struct ScenarioVerdict {
    std::string scenario;
    std::string requirement;
    Polarity polarity = Polarity::expected_valid;
    bool realized = false;
    EvidenceKind evidence_kind = EvidenceKind::none;
    Trace evidence;
    std::size_t expansions = 0;
};

/// Exact ratio; rendered as a whole percent rounded half-up.
struct Ratio {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
    std::uint64_t percent() const { return (200 * numerator + denominator) / (2 * denominator); }

    friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Each metric is absent (N/A) when its denominator is zero.
struct Metrics {
    std::optional<Ratio> precision;
    std::optional<Ratio> recall;
    std::optional<Ratio> accuracy;
};

struct ValidateOptions {
    semantics::EnumerationBounds bounds;
    bool coverage = true;
};

struct ValidationReport {
    std::string model_name;
    std::size_t requirement_count = 0;
    std::vector<ScenarioVerdict> verdicts;
    ConfusionMatrix matrix;
    Metrics metrics;
    bool coverage_checked = true;
    std::vector<Trace> uncovered;
    bool truncated = false;
    std::size_t model_path_count = 0;
    semantics::EnumerationBounds bounds;
    bool valid = false;
    Diagnostics diagnostics;  // warnings raised along the way
};

/// Loop k-fold for every k in [min, min(max, loop_bound)], each copy expanded
/// independently, concatenated in order. Shortlex order, no duplicates.
std::vector<Trace> expand_scenario(const Scenario& s, std::size_t loop_bound);

/// Expected-valid: realized iff every expansion is accepted.
/// Expected-invalid: realized iff some expansion is accepted.
/// Error EmptyExpansion when the scenario has no expansion at this bound.
Result<ScenarioVerdict> check_scenario(const semantics::TraceAutomaton& automaton, const Scenario& s,
                                       std::size_t loop_bound);

ConfusionMatrix classify(std::span<const ScenarioVerdict> verdicts);

Metrics compute_metrics(const ConfusionMatrix& m);

struct Coverage {
    std::vector<Trace> uncovered;
    bool truncated = false;
    std::size_t model_path_count = 0;
};

/// Model traces (within bounds) matched by no expansion of any expected-valid scenario.
/// Expected-invalid scenarios in the input are ignored.
Coverage coverage_check(const semantics::TraceAutomaton& automaton, std::span<const Scenario> scenarios,
                        const semantics::EnumerationBounds& bounds);

/// compile -> check_scenario per scenario -> classify -> compute_metrics -> coverage_check.
Result<ValidationReport> validate(const ChoreographyModel& model, const requirements::RequirementsDoc& doc,
                                  const ValidateOptions& options = {});

}  // namespace chorgate::conformance
