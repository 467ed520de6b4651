#include "chorgate/core/choreography.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace chorgate {

namespace {

constexpr const char* kOrigin = "core";

std::set<std::string> reach(const std::vector<std::string>& seeds,
                            const std::map<std::string, std::vector<std::string>>& adj) {
    std::set<std::string> seen(seeds.begin(), seeds.end());
    std::queue<std::string> work;
    for (const auto& s : seeds) work.push(s);
    while (!work.empty()) {
        auto v = work.front();
        work.pop();
        auto it = adj.find(v);
        if (it == adj.end()) continue;
        for (const auto& w : it->second) {
            if (seen.insert(w).second) work.push(w);
        }
    }
    return seen;
}

}  // namespace

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::start_event: return "startEvent";
        case NodeKind::end_event: return "endEvent";
        case NodeKind::choreography_task: return "choreographyTask";
        case NodeKind::exclusive_gateway: return "exclusiveGateway";
        case NodeKind::parallel_gateway: return "parallelGateway";
    }
    return "unknown";
}

const Node* ChoreographyModel::find_node(const std::string& id) const {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Node& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
}

const MessageLink* ChoreographyModel::find_link(const std::string& id) const {
    auto it = std::find_if(links.begin(), links.end(), [&](const MessageLink& l) { return l.id == id; });
    return it == links.end() ? nullptr : &*it;
}

Diagnostics validate_choreography(const ChoreographyModel& model) {
    Diagnostics defects;
    auto defect = [&](const char* code, const std::string& where, std::string message) {
        defects.push_back(make_error(kOrigin, code, where, std::move(message)));
    };

    std::set<std::string> node_ids;
    for (const auto& n : model.nodes) {
        if (!node_ids.insert(n.id).second) defect("DuplicateId", n.id, "node id '" + n.id + "' is not unique");
    }
    std::set<std::string> link_ids;
    for (const auto& l : model.links) {
        if (!link_ids.insert(l.id).second) defect("DuplicateId", l.id, "link id '" + l.id + "' is not unique");
    }

    std::map<std::string, std::vector<std::string>> succ, pred;
    std::map<std::string, std::size_t> in_degree, out_degree;
    std::set<std::pair<std::string, std::string>> seen_flows;
    for (const auto& f : model.flows) {
        bool dangling = false;
        for (const auto* end : {&f.source, &f.target}) {
            if (!node_ids.contains(*end)) {
                defect("DanglingFlowRef", f.id,
                       "sequence flow '" + f.id + "' references unknown node '" + *end + "'");
                dangling = true;
            }
        }
        if (dangling) continue;
        if (!seen_flows.emplace(f.source, f.target).second) {
            defect("DuplicateFlow", f.id,
                   "more than one sequence flow from '" + f.source + "' to '" + f.target + "'");
            continue;
        }
        succ[f.source].push_back(f.target);
        pred[f.target].push_back(f.source);
        ++out_degree[f.source];
        ++in_degree[f.target];
    }

    std::vector<std::string> starts, ends;
    for (const auto& n : model.nodes) {
        if (n.kind == NodeKind::start_event) starts.push_back(n.id);
        if (n.kind == NodeKind::end_event) ends.push_back(n.id);
    }
    if (starts.empty()) defect("MissingStartEvent", model.name, "model has no start event");
    if (starts.size() > 1) {
        std::string list;
        for (const auto& s : starts) list += (list.empty() ? "" : ", ") + s;
        defect("MultipleStartEvents", starts[1], "model has " + std::to_string(starts.size()) +
                                                     " start events: " + list);
    }
    if (ends.empty()) defect("MissingEndEvent", model.name, "model has no end event");

    std::map<std::string, std::size_t> link_refs;
    for (const auto& n : model.nodes) {
        const std::size_t in = in_degree[n.id];
        const std::size_t out = out_degree[n.id];
        switch (n.kind) {
            case NodeKind::start_event:
                if (in != 0 || out != 1) {
                    defect("BadEventArity", n.id,
                           "start event '" + n.id + "' must have no incoming and one outgoing flow (has " +
                               std::to_string(in) + " in, " + std::to_string(out) + " out)");
                }
                break;
            case NodeKind::end_event:
                if (out != 0) {
                    defect("BadEventArity", n.id, "end event '" + n.id + "' has outgoing flows");
                }
                break;
            case NodeKind::choreography_task:
                if (in != 1 || out != 1) {
                    defect("BadTaskArity", n.id,
                           "task '" + n.id + "' must have exactly one incoming and one outgoing flow (has " +
                               std::to_string(in) + " in, " + std::to_string(out) + " out)");
                }
                break;
            case NodeKind::exclusive_gateway:
            case NodeKind::parallel_gateway:
                if (!((in == 1 && out >= 2) || (in >= 2 && out == 1))) {
                    defect("BadGatewayArity", n.id,
                           std::string(to_string(n.kind)) + " '" + n.id +
                               "' must be a split (1 in, 2+ out) or a merge (2+ in, 1 out); has " +
                               std::to_string(in) + " in, " + std::to_string(out) + " out");
                }
                break;
        }
        if (!n.is_task()) continue;

        std::vector<std::string> refs{n.initiating_link};
        if (n.return_link) refs.push_back(*n.return_link);
        for (const auto& ref : refs) {
            const MessageLink* link = model.find_link(ref);
            if (link == nullptr) {
                defect("DanglingLinkRef", n.id, "task '" + n.id + "' references unknown link '" + ref + "'");
                continue;
            }
            ++link_refs[ref];
            if (link->sending_activity != n.id || link->receiving_activity != n.id) {
                defect("ActivityMismatch", link->id,
                       "link '" + link->id + "' activities do not name its owning task '" + n.id + "'");
            }
        }
    }

    if (starts.size() == 1 && !ends.empty()) {
        auto forward = reach(starts, succ);
        auto backward = reach(ends, pred);
        for (const auto& n : model.nodes) {
            if (!forward.contains(n.id) || !backward.contains(n.id)) {
                defect("OrphanNode", n.id,
                       "node '" + n.id + "' does not lie on any start-to-end path" +
                           (forward.contains(n.id) ? " (cannot reach an end event)"
                                                   : " (unreachable from the start event)"));
            }
        }
    }

    std::set<std::string> participants(model.participants.begin(), model.participants.end());
    for (const auto& l : model.links) {
        if (l.sender == l.receiver) {
            defect("SelfMessage", l.id,
                   "link '" + l.id + "' sends '" + l.message + "' from '" + l.sender + "' to itself");
        }
        for (const auto* p : {&l.sender, &l.receiver}) {
            if (!participants.contains(*p)) {
                defect("UnknownParticipant", l.id,
                       "link '" + l.id + "' names unknown participant '" + *p + "'");
            }
        }
        const std::size_t refs = link_refs[l.id];
        if (refs == 0) {
            defect("UnreferencedLink", l.id, "link '" + l.id + "' is not used by any task");
        } else if (refs > 1) {
            defect("SharedLink", l.id,
                   "link '" + l.id + "' is used by " + std::to_string(refs) + " tasks");
        }
    }
    return defects;
}

ChoreographyBuilder::ChoreographyBuilder(std::string name) { model_.name = std::move(name); }

std::string ChoreographyBuilder::next_id(const char* prefix) {
    return prefix + std::to_string(++counter_);
}

void ChoreographyBuilder::add_participant(const std::string& name) {
    auto& ps = model_.participants;
    auto it = std::lower_bound(ps.begin(), ps.end(), name);
    if (it == ps.end() || *it != name) ps.insert(it, name);
}

std::string ChoreographyBuilder::start(std::string id) {
    if (id.empty()) id = next_id("start");
    model_.nodes.push_back(Node{id, NodeKind::start_event, {}, {}, {}, {}});
    return id;
}

std::string ChoreographyBuilder::end(std::string id) {
    if (id.empty()) id = next_id("end");
    model_.nodes.push_back(Node{id, NodeKind::end_event, {}, {}, {}, {}});
    return id;
}

std::string ChoreographyBuilder::exclusive(std::string id) {
    if (id.empty()) id = next_id("xor");
    model_.nodes.push_back(Node{id, NodeKind::exclusive_gateway, {}, {}, {}, {}});
    return id;
}

std::string ChoreographyBuilder::parallel(std::string id) {
    if (id.empty()) id = next_id("and");
    model_.nodes.push_back(Node{id, NodeKind::parallel_gateway, {}, {}, {}, {}});
    return id;
}

std::string ChoreographyBuilder::add_link(const MessageEvent& e, const std::string& task_id) {
    add_participant(e.sender);
    add_participant(e.receiver);
    std::string id = next_id("link");
    model_.links.push_back(MessageLink{id, e.message, e.sender, e.receiver, task_id, task_id});
    return id;
}

std::string ChoreographyBuilder::task(const MessageEvent& initiating, std::optional<MessageEvent> ret,
                                      std::optional<LoopMarker> loop, std::string id) {
    if (id.empty()) id = next_id("task");
    Node n{id, NodeKind::choreography_task, initiating.message, add_link(initiating, id), {}, loop};
    if (ret) n.return_link = add_link(*ret, id);
    model_.nodes.push_back(std::move(n));
    return id;
}

std::string ChoreographyBuilder::flow(const std::string& source, const std::string& target, std::string id) {
    if (id.empty()) id = next_id("flow");
    model_.flows.push_back(SequenceFlow{id, source, target});
    return id;
}

ChoreographyModel ChoreographyBuilder::build() const { return model_; }

}  // namespace chorgate
