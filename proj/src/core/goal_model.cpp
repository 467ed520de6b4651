#include "chorgate/core/goal_model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

namespace chorgate {

namespace {

constexpr const char* kOrigin = "core";

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ", ";
        out += "'" + s + "'";
    }
    return out;
}

// Strongly connected components with more than one member (or a self loop).
std::vector<std::vector<std::string>> cyclic_components(
    const std::vector<std::string>& nodes, const std::map<std::string, std::vector<std::string>>& succ) {
    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    std::vector<std::vector<std::string>> out;
    int counter = 0;

    std::function<void(const std::string&)> visit = [&](const std::string& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        if (auto it = succ.find(v); it != succ.end()) {
            for (const auto& w : it->second) {
                if (!index.contains(w)) {
                    visit(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on_stack.contains(w)) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::string> comp;
            std::string w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                comp.push_back(w);
            } while (w != v);
            bool self_loop = false;
            if (auto it = succ.find(v); it != succ.end()) {
                self_loop = std::find(it->second.begin(), it->second.end(), v) != it->second.end();
            }
            if (comp.size() > 1 || self_loop) {
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
        }
    };

    for (const auto& n : nodes) {
        if (!index.contains(n)) visit(n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool GoalModel::contains(const std::string& id) const { return find(id) != nullptr; }

const Goal* GoalModel::find(const std::string& id) const {
    for (const auto& g : goals_) {
        if (g.id == id) return &g;
    }
    return nullptr;
}

bool GoalModel::is_requirement(const std::string& id) const {
    if (!contains(id)) return false;
    return std::none_of(edges_.begin(), edges_.end(),
                        [&](const GoalEdge& e) { return e.parent == id; });
}

std::string GoalModel::parent_of(const std::string& id) const {
    for (const auto& e : edges_) {
        if (e.child == id) return e.parent;
    }
    return {};
}

Result<GoalModel> validate_goal_model(const GoalGraph& raw) {
    Diagnostics defects;

    if (raw.goals.size() < 2) {
        defects.push_back(make_error(kOrigin, "Degenerate", "goals",
                                     "a goal model needs a final goal and at least one requirement (found " +
                                         std::to_string(raw.goals.size()) + " goal(s))"));
    }

    std::map<std::string, std::size_t> occurrences;
    std::vector<std::string> ids;
    for (const auto& g : raw.goals) {
        if (occurrences[g.id]++ == 0) ids.push_back(g.id);
    }
    for (const auto& id : ids) {
        if (occurrences[id] > 1) {
            defects.push_back(make_error(kOrigin, "DuplicateGoalId", id,
                                         "goal id '" + id + "' is declared " +
                                             std::to_string(occurrences[id]) + " times"));
        }
    }

    const bool root_known = occurrences.contains(raw.final_goal);
    if (!root_known) {
        defects.push_back(make_error(kOrigin, "UnknownFinalGoal", raw.final_goal,
                                     raw.final_goal.empty()
                                         ? std::string("no final goal designated")
                                         : "final goal '" + raw.final_goal + "' is not a declared goal"));
    }

    std::map<std::string, std::vector<std::string>> succ;
    std::map<std::string, std::vector<std::string>> parents;
    for (const auto& e : raw.edges) {
        bool known = true;
        for (const auto* end : {&e.parent, &e.child}) {
            if (!occurrences.contains(*end)) {
                defects.push_back(make_error(kOrigin, "UnknownGoal", *end,
                                             "edge (" + e.parent + ", " + e.child +
                                                 ") references undeclared goal '" + *end + "'"));
                known = false;
            }
        }
        if (!known) continue;
        succ[e.parent].push_back(e.child);
        parents[e.child].push_back(e.parent);
    }

    if (root_known) {
        if (auto it = parents.find(raw.final_goal); it != parents.end()) {
            defects.push_back(make_error(kOrigin, "NotATree", raw.final_goal,
                                         "final goal '" + raw.final_goal + "' has parent(s) " +
                                             join(it->second)));
        }
    }
    for (const auto& id : ids) {
        auto it = parents.find(id);
        if (id == raw.final_goal || it == parents.end() || it->second.size() < 2) continue;
        defects.push_back(make_error(kOrigin, "NotATree", id,
                                     "goal '" + id + "' has multiple parents " + join(it->second)));
    }
    for (const auto& comp : cyclic_components(ids, succ)) {
        defects.push_back(make_error(kOrigin, "NotATree", comp.front(),
                                     "cycle through goals " + join(comp)));
    }

    if (root_known) {
        std::set<std::string> seen{raw.final_goal};
        std::queue<std::string> work;
        work.push(raw.final_goal);
        while (!work.empty()) {
            auto v = work.front();
            work.pop();
            for (const auto& w : succ[v]) {
                if (seen.insert(w).second) work.push(w);
            }
        }
        for (const auto& id : ids) {
            if (!seen.contains(id)) {
                defects.push_back(make_error(kOrigin, "Unreachable", id,
                                             "goal '" + id + "' is not reachable from final goal '" +
                                                 raw.final_goal + "'"));
            }
        }
    }

    if (!defects.empty()) return Result<GoalModel>::failure(std::move(defects));

    GoalModel model;
    model.goals_ = raw.goals;
    model.final_goal_ = raw.final_goal;
    model.edges_ = raw.edges;
    return Result<GoalModel>::success(std::move(model));
}

std::vector<std::string> requirements_of(const GoalModel& model) {
    std::set<std::string> internal;
    for (const auto& e : model.edges()) internal.insert(e.parent);
    std::vector<std::string> leaves;
    for (const auto& g : model.goals()) {
        if (!internal.contains(g.id)) leaves.push_back(g.id);
    }
    std::sort(leaves.begin(), leaves.end());
    return leaves;
}

}  // namespace chorgate
