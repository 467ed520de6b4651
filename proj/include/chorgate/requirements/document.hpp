#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chorgate/core/choreography.hpp"
#include "chorgate/core/diagnostic.hpp"
#include "chorgate/core/goal_model.hpp"
#include "chorgate/core/scenario.hpp"

namespace chorgate::requirements {

/// Goal model plus the scenarios attached to its requirement leaves.
struct RequirementsDoc {
    GoalModel goal_model;
    std::vector<Scenario> scenarios;

    const Scenario* find_scenario(const std::string& id) const;

    friend bool operator==(const RequirementsDoc&, const RequirementsDoc&) = default;
};

/// Parses the JSON requirements document:
///
///   { "goals":     [ {"id", "label"?, "parent"?}, ... ],      // root has no parent
///     "scenarios": [ {"id", "requirement", "polarity": "valid"|"invalid",
///                     "description"?, "body": [element, ...]}, ... ] }
///
/// where an element is {"msg", "from", "to"} or {"loop": {"min", "max", "body"}}.
/// Locations in diagnostics are JSON pointers.
Result<RequirementsDoc> parse_requirements(std::string_view document);

/// Inverse of parse_requirements; output re-parses to an equal document.
std::string serialize_requirements(const RequirementsDoc& doc);

/// Every participant named by a scenario must be a participant of the model.
Diagnostics bind_participants(const RequirementsDoc& doc, const ChoreographyModel& model);

}  // namespace chorgate::requirements
