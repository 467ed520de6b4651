#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chorgate/conformance/validate.hpp"
#include "chorgate/semantics/automaton.hpp"

namespace chorgate::report {

enum class Format { text, json, csv };

std::optional<Format> parse_format(std::string_view name);

/// "77%", or "N/A" for an undefined metric.
std::string percent(const std::optional<conformance::Ratio>& r);

/// Column names of the csv row, comma separated.
std::string csv_header();

/// text: human summary with up to 10 uncovered witnesses.
/// json: the full report with stable key order and exact ratios.
/// csv:  one row: process, #requirements, #valid, #invalid, TP, FN, FP, TN, accuracy, precision, recall.
std::string render(const conformance::ValidationReport& report, Format format);

/// Enumerated model paths in the requested format.
std::string render_paths(const std::string& model_name, const semantics::EnumerationResult& paths,
                         Format format);

struct CsvRow {
    std::string process;
    std::size_t requirements = 0;
    std::size_t valid_scenarios = 0;
    std::size_t invalid_scenarios = 0;
    ConfusionMatrix matrix;
    std::string accuracy;
    std::string precision;
    std::string recall;
};

/// Reads back one row produced by render(..., Format::csv).
std::optional<CsvRow> parse_csv_row(std::string_view line);

}  // namespace chorgate::report
