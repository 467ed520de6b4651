#include "chorgate/requirements/document.hpp"

#include <json.hpp>

#include <algorithm>
#include <initializer_list>
#include <set>

namespace chorgate::requirements {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kOrigin = "requirements";

class Reader {
public:
    Result<RequirementsDoc> run(std::string_view text) {
        json root;
        try {
            root = json::parse(text);
        } catch (const json::parse_error& e) {
            return Result<RequirementsDoc>::failure(
                {make_error(kOrigin, "MalformedDocument", "", e.what(), line_of(text, e.byte))});
        }
        if (!root.is_object()) {
            error("MalformedDocument", "", "top level must be an object");
            return fail();
        }
        check_keys(root, "", {"goals", "scenarios", "$schema"});

        auto goals = read_goals(root);
        std::vector<Scenario> scenarios = read_scenarios(root);
        if (has_errors(diags_)) return fail();

        auto model = validate_goal_model(goals);
        if (!model) {
            for (auto d : model.diagnostics()) {
                d.location = "/goals[" + d.location + "]";
                diags_.push_back(std::move(d));
            }
            return fail();
        }

        std::set<std::string> ids;
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            const auto& s = scenarios[i];
            const auto where = "/scenarios/" + std::to_string(i);
            if (!ids.insert(s.id).second) {
                error("DuplicateScenarioId", where + "/id", "scenario id '" + s.id + "' is not unique");
            }
            if (!model.value().contains(s.requirement)) {
                error("UnknownRequirement", where + "/requirement",
                      "scenario '" + s.id + "' is bound to undeclared goal '" + s.requirement + "'");
            } else if (!model.value().is_requirement(s.requirement)) {
                error("ScenarioForNonRequirement", where + "/requirement",
                      "scenario '" + s.id + "' is bound to '" + s.requirement +
                          "', which is refined by sub-goals and is not a requirement");
            }
        }
        if (has_errors(diags_)) return fail();
        return Result<RequirementsDoc>::success(
            RequirementsDoc{std::move(model).value(), std::move(scenarios)}, std::move(diags_));
    }

private:
    static std::size_t line_of(std::string_view text, std::size_t byte) {
        byte = std::min(byte, text.size());
        return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
    }

    void error(const char* code, std::string where, std::string message) {
        diags_.push_back(make_error(kOrigin, code, std::move(where), std::move(message)));
    }
    void warn(const char* code, std::string where, std::string message) {
        diags_.push_back(make_warning(kOrigin, code, std::move(where), std::move(message)));
    }
    void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> known) {
        for (const auto& [key, _] : obj.items()) {
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                warn("UnknownKey", where + "/" + key, "key '" + key + "' is ignored");
            }
        }
    }

    Result<RequirementsDoc> fail() { return Result<RequirementsDoc>::failure(std::move(diags_)); }

    const std::string* string_field(const json& obj, const char* key, const std::string& where,
                                    bool required = true) {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) error("MalformedDocument", where, std::string("missing string field '") + key + "'");
            return nullptr;
        }
        if (!it->is_string()) {
            error("MalformedDocument", where + "/" + key, std::string("'") + key + "' must be a string");
            return nullptr;
        }
        return it->get_ptr<const std::string*>();
    }

    GoalGraph read_goals(const json& root) {
        GoalGraph g;
        auto it = root.find("goals");
        if (it == root.end() || !it->is_array()) {
            error("MalformedDocument", "/goals", "'goals' must be an array");
            return g;
        }
        std::vector<std::string> roots;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& jg = (*it)[i];
            const auto where = "/goals/" + std::to_string(i);
            if (!jg.is_object()) {
                error("MalformedDocument", where, "goal must be an object");
                continue;
            }
            check_keys(jg, where, {"id", "label", "parent"});
            const auto* id = string_field(jg, "id", where);
            if (id == nullptr) continue;
            const auto* label = string_field(jg, "label", where, false);
            g.goals.push_back(Goal{*id, label ? *label : *id});
            if (jg.contains("parent") && !jg["parent"].is_null()) {
                if (const auto* parent = string_field(jg, "parent", where)) {
                    g.edges.push_back(GoalEdge{*parent, *id});
                }
            } else {
                roots.push_back(*id);
            }
        }
        if (!roots.empty()) g.final_goal = roots.front();
        return g;
    }

    std::vector<ScenarioElement> read_body(const json& body, const std::string& where) {
        std::vector<ScenarioElement> out;
        if (!body.is_array()) {
            error("MalformedDocument", where, "'body' must be an array");
            return out;
        }
        for (std::size_t i = 0; i < body.size(); ++i) {
            const auto& el = body[i];
            const auto at = where + "/" + std::to_string(i);
            if (!el.is_object()) {
                error("MalformedDocument", at, "scenario element must be an object");
            } else if (el.contains("loop")) {
                check_keys(el, at, {"loop"});
                out.emplace_back(read_loop(el["loop"], at + "/loop"));
            } else if (el.contains("msg")) {
                check_keys(el, at, {"msg", "from", "to"});
                const auto* msg = string_field(el, "msg", at);
                const auto* from = string_field(el, "from", at);
                const auto* to = string_field(el, "to", at);
                if (!msg || !from || !to) continue;
                if (*from == *to) {
                    error("SelfMessage", at, "interaction '" + *msg + "' is sent from '" + *from + "' to itself");
                }
                out.emplace_back(MessageEvent{*msg, *from, *to});
            } else {
                error("MalformedDocument", at, "scenario element needs either 'msg' or 'loop'");
            }
        }
        return out;
    }

    Loop read_loop(const json& jl, const std::string& where) {
        Loop loop;
        if (!jl.is_object()) {
            error("MalformedDocument", where, "'loop' must be an object");
            return loop;
        }
        check_keys(jl, where, {"min", "max", "body"});
        bool bounds_ok = true;
        for (const char* key : {"min", "max"}) {
            auto it = jl.find(key);
            if (it == jl.end() || !it->is_number_unsigned()) {
                error("MalformedDocument", where + "/" + key,
                      std::string("loop bound '") + key + "' must be a non-negative integer");
                bounds_ok = false;
            }
        }
        if (bounds_ok) {
            loop.min_reps = jl["min"].get<std::size_t>();
            loop.max_reps = jl["max"].get<std::size_t>();
            if (loop.min_reps > loop.max_reps) {
                error("BadLoopBounds", where,
                      "loop min " + std::to_string(loop.min_reps) + " exceeds max " + std::to_string(loop.max_reps));
            }
        }
        if (!jl.contains("body")) {
            error("MalformedDocument", where, "loop has no 'body'");
            return loop;
        }
        loop.body = read_body(jl["body"], where + "/body");
        if (jl["body"].is_array() && jl["body"].empty()) {
            error("EmptyLoopBody", where + "/body", "loop body must contain at least one element");
        }
        return loop;
    }

    std::vector<Scenario> read_scenarios(const json& root) {
        std::vector<Scenario> out;
        auto it = root.find("scenarios");
        if (it == root.end()) return out;
        if (!it->is_array()) {
            error("MalformedDocument", "/scenarios", "'scenarios' must be an array");
            return out;
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& js = (*it)[i];
            const auto where = "/scenarios/" + std::to_string(i);
            if (!js.is_object()) {
                error("MalformedDocument", where, "scenario must be an object");
                continue;
            }
            check_keys(js, where, {"id", "requirement", "polarity", "description", "body"});
            Scenario s;
            const auto* id = string_field(js, "id", where);
            const auto* req = string_field(js, "requirement", where);
            const auto* pol = string_field(js, "polarity", where);
            if (const auto* desc = string_field(js, "description", where, false)) s.description = *desc;
            if (pol != nullptr) {
                if (*pol == "valid") {
                    s.polarity = Polarity::expected_valid;
                } else if (*pol == "invalid") {
                    s.polarity = Polarity::expected_invalid;
                } else {
                    error("MalformedDocument", where + "/polarity",
                          "polarity must be \"valid\" or \"invalid\", not \"" + *pol + "\"");
                }
            }
            if (!js.contains("body")) {
                error("MalformedDocument", where, "scenario has no 'body'");
            } else {
                s.body = read_body(js["body"], where + "/body");
            }
            if (!id || !req || !pol) continue;
            s.id = *id;
            s.requirement = *req;
            out.push_back(std::move(s));
        }
        return out;
    }

    Diagnostics diags_;
};

json body_to_json(const std::vector<ScenarioElement>& body) {
    json out = json::array();
    for (const auto& el : body) {
        if (const auto* e = std::get_if<MessageEvent>(&el.node)) {
            out.push_back({{"msg", e->message}, {"from", e->sender}, {"to", e->receiver}});
        } else {
            const auto& l = std::get<Loop>(el.node);
            out.push_back({{"loop", {{"min", l.min_reps}, {"max", l.max_reps}, {"body", body_to_json(l.body)}}}});
        }
    }
    return out;
}

}  // namespace

const Scenario* RequirementsDoc::find_scenario(const std::string& id) const {
    auto it = std::find_if(scenarios.begin(), scenarios.end(), [&](const Scenario& s) { return s.id == id; });
    return it == scenarios.end() ? nullptr : &*it;
}

Result<RequirementsDoc> parse_requirements(std::string_view document) { return Reader{}.run(document); }

std::string serialize_requirements(const RequirementsDoc& doc) {
    json j;
    j["goals"] = json::array();
    const auto& gm = doc.goal_model;
    for (const auto& g : gm.goals()) {
        json jg{{"id", g.id}, {"label", g.label}};
        if (g.id != gm.final_goal()) jg["parent"] = gm.parent_of(g.id);
        j["goals"].push_back(std::move(jg));
    }
    j["scenarios"] = json::array();
    for (const auto& s : doc.scenarios) {
        json js{{"id", s.id}, {"requirement", s.requirement}, {"polarity", to_string(s.polarity)}};
        if (!s.description.empty()) js["description"] = s.description;
        js["body"] = body_to_json(s.body);
        j["scenarios"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

Diagnostics bind_participants(const RequirementsDoc& doc, const ChoreographyModel& model) {
    Diagnostics out;
    const std::set<std::string> known(model.participants.begin(), model.participants.end());
    for (const auto& s : doc.scenarios) {
        const auto events = interactions_of(s);
        for (std::size_t i = 0; i < events.size(); ++i) {
            for (const auto* p : {&events[i].sender, &events[i].receiver}) {
                if (known.contains(*p)) continue;
                out.push_back(make_error(kOrigin, "UnknownScenarioParticipant",
                                         "scenario '" + s.id + "' event " + std::to_string(i),
                                         "participant '" + *p + "' in interaction '" + events[i].message +
                                             "' is not a participant of model '" + model.name + "'"));
            }
        }
    }
    return out;
}

}  // namespace chorgate::requirements
