#pragma once

#include <string>
#include <vector>

#include "chorgate/core/diagnostic.hpp"

namespace chorgate {

struct Goal {
    std::string id;
    std::string label;

    friend bool operator==(const Goal&, const Goal&) = default;
};

struct GoalEdge {
    std::string parent;
    std::string child;

    friend bool operator==(const GoalEdge&, const GoalEdge&) = default;
};

/// Unchecked goal graph as supplied by an author.
struct GoalGraph {
    std::vector<Goal> goals;
    std::string final_goal;
    std::vector<GoalEdge> edges;
};

/// A refinement tree rooted at the final goal whose leaves are the requirements.
/// Only obtainable through validate_goal_model, so every instance is a tree.
class GoalModel {
public:
    const std::vector<Goal>& goals() const { return goals_; }
    const std::string& final_goal() const { return final_goal_; }
    const std::vector<GoalEdge>& edges() const { return edges_; }

    bool contains(const std::string& id) const;
    const Goal* find(const std::string& id) const;
    bool is_requirement(const std::string& id) const;
    /// Parent of a non-root goal; empty for the root or unknown ids.
    std::string parent_of(const std::string& id) const;

    friend bool operator==(const GoalModel&, const GoalModel&) = default;

private:
    friend Result<GoalModel> validate_goal_model(const GoalGraph& raw);

    std::vector<Goal> goals_;
    std::string final_goal_;
    std::vector<GoalEdge> edges_;
};

/// Checks the tree invariants and reports every defect found, not just the first.
/// Codes: Degenerate, DuplicateGoalId, UnknownFinalGoal, UnknownGoal, NotATree, Unreachable.
Result<GoalModel> validate_goal_model(const GoalGraph& raw);

/// Leaf goals, sorted by id.
std::vector<std::string> requirements_of(const GoalModel& model);

}  // namespace chorgate
