#include "chorgate/semantics/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>

namespace chorgate::semantics {

namespace {

constexpr const char* kOrigin = "semantics";

using Place = std::uint32_t;
using Marking = std::vector<Place>;  // sorted; a place holds at most one token

struct TokenRule {
    std::vector<Place> consume;
    std::vector<Place> produce;
    std::optional<std::string> link;
    std::vector<EdgeTag> traversed;
    std::string node;  // node that owns the rule, for diagnostics
};

bool contains_all(const Marking& m, const std::vector<Place>& ps) {
    return std::all_of(ps.begin(), ps.end(), [&](Place p) { return std::binary_search(m.begin(), m.end(), p); });
}

}  // namespace

class Compiler {
public:
    Compiler(const ChoreographyModel& model, std::size_t max_states) : model_(model), max_states_(max_states) {}

    Result<TraceAutomaton> run() {
        build_rules();
        explore();
        if (!diags_.empty()) return Result<TraceAutomaton>::failure(std::move(diags_));
        return Result<TraceAutomaton>::success(std::move(out_));
    }

private:
    Place new_place(std::string name) {
        place_names_.push_back(std::move(name));
        return static_cast<Place>(place_names_.size() - 1);
    }

    EdgeTag new_loop_tag(const std::string& task) {
        out_.tag_names_.push_back("loop:" + task);
        return static_cast<EdgeTag>(out_.tag_names_.size() - 1);
    }

    void build_rules() {
        std::map<std::string, std::vector<Place>> incoming, outgoing;
        for (std::size_t i = 0; i < model_.flows.size(); ++i) {
            const auto& f = model_.flows[i];
            new_place("flow '" + f.id + "'");
            out_.tag_names_.push_back(f.id);
            outgoing[f.source].push_back(static_cast<Place>(i));
            incoming[f.target].push_back(static_cast<Place>(i));
        }

        for (const auto& n : model_.nodes) {
            const auto& ins = incoming[n.id];
            const auto& outs = outgoing[n.id];
            switch (n.kind) {
                case NodeKind::start_event:
                    initial_.insert(initial_.end(), outs.begin(), outs.end());
                    break;
                case NodeKind::end_event:
                    for (Place i : ins) rules_.push_back({{i}, {}, std::nullopt, {}, n.id});
                    break;
                case NodeKind::exclusive_gateway:
                    if (ins.size() == 1) {
                        for (Place o : outs) rules_.push_back({{ins[0]}, {o}, std::nullopt, {o}, n.id});
                    } else {
                        for (Place i : ins) rules_.push_back({{i}, {outs.at(0)}, std::nullopt, {outs.at(0)}, n.id});
                    }
                    break;
                case NodeKind::parallel_gateway: {
                    std::vector<EdgeTag> tags(outs.begin(), outs.end());
                    rules_.push_back({ins, outs, std::nullopt, tags, n.id});
                    break;
                }
                case NodeKind::choreography_task:
                    add_task(n, ins.at(0), outs.at(0));
                    break;
            }
        }
        std::sort(initial_.begin(), initial_.end());
    }

    // Body of a task from `src` into `dst`; a return message goes through a
    // pending place so no other rule can fire between the two events.
    void add_exchange(const Node& n, Place src, Place dst, std::vector<EdgeTag> first_tags,
                      std::vector<EdgeTag> last_tags, std::optional<Place>& pending) {
        if (!n.return_link) {
            auto tags = first_tags;
            tags.insert(tags.end(), last_tags.begin(), last_tags.end());
            rules_.push_back({{src}, {dst}, n.initiating_link, tags, n.id});
            return;
        }
        if (!pending) {
            pending = new_place("pending return of task '" + n.id + "'");
            pending_places_.insert(*pending);
            rules_.push_back({{*pending}, {dst}, *n.return_link, last_tags, n.id});
        }
        rules_.push_back({{src}, {*pending}, n.initiating_link, first_tags, n.id});
    }

    void add_task(const Node& n, Place in, Place out) {
        std::optional<Place> pending;
        if (!n.loop) {
            add_exchange(n, in, out, {}, {out}, pending);
            return;
        }
        const Place loop_point = new_place("loop point of task '" + n.id + "'");
        const EdgeTag body = new_loop_tag(n.id);
        if (n.loop->test_before) {
            rules_.push_back({{in}, {loop_point}, std::nullopt, {}, n.id});
        } else {
            add_exchange(n, in, loop_point, {body}, {}, pending);
        }
        add_exchange(n, loop_point, loop_point, {body}, {}, pending);
        rules_.push_back({{loop_point}, {out}, std::nullopt, {out}, n.id});
    }

    void explore() {
        std::map<Marking, StateId> ids;
        std::deque<Marking> work;
        auto intern = [&](const Marking& m) -> std::optional<StateId> {
            if (auto it = ids.find(m); it != ids.end()) return it->second;
            if (ids.size() >= max_states_) {
                diags_.push_back(make_error(kOrigin, "UnsupportedStructure", model_.name,
                                            "state space exceeds " + std::to_string(max_states_) + " markings"));
                return std::nullopt;
            }
            const auto id = static_cast<StateId>(ids.size());
            ids.emplace(m, id);
            out_.accepting_.push_back(m.empty());
            out_.event_index_.emplace_back();
            out_.epsilon_index_.emplace_back();
            work.push_back(m);
            return id;
        };
        intern(initial_);

        while (!work.empty() && diags_.empty()) {
            const Marking m = std::move(work.front());
            work.pop_front();
            const StateId from = ids.at(m);

            std::optional<Place> busy;
            for (Place p : m) {
                if (pending_places_.contains(p)) busy = p;
            }

            for (const auto& r : rules_) {
                if (!contains_all(m, r.consume)) continue;
                if (busy && std::find(r.consume.begin(), r.consume.end(), *busy) == r.consume.end()) continue;

                Marking next;
                std::set_difference(m.begin(), m.end(), r.consume.begin(), r.consume.end(),
                                    std::back_inserter(next));
                for (Place p : r.produce) {
                    if (std::binary_search(next.begin(), next.end(), p)) {
                        diags_.push_back(make_error(
                            kOrigin, "UnsupportedStructure", r.node,
                            place_names_[p] + " can hold two tokens after '" + r.node +
                                "' fires; parallel branches must be closed by a parallel join"));
                        return;
                    }
                    next.insert(std::upper_bound(next.begin(), next.end(), p), p);
                }
                auto to = intern(next);
                if (!to) return;
                if (r.link) {
                    const MessageLink* link = model_.find_link(*r.link);
                    out_.event_index_[from].push_back(static_cast<std::uint32_t>(out_.events_.size()));
                    out_.events_.push_back(EventTransition{from, link->event(), link->id, *to, r.traversed});
                } else {
                    out_.epsilon_index_[from].push_back(static_cast<std::uint32_t>(out_.epsilons_.size()));
                    out_.epsilons_.push_back(EpsilonTransition{from, *to, r.traversed});
                }
            }
        }
    }

    const ChoreographyModel& model_;
    std::size_t max_states_;
    std::vector<std::string> place_names_;
    std::vector<TokenRule> rules_;
    std::set<Place> pending_places_;
    Marking initial_;
    TraceAutomaton out_;
    Diagnostics diags_;
};

std::vector<StateId> TraceAutomaton::accepting_states() const {
    std::vector<StateId> out;
    for (StateId s = 0; s < accepting_.size(); ++s) {
        if (accepting_[s]) out.push_back(s);
    }
    return out;
}

std::vector<MessageEvent> TraceAutomaton::alphabet() const {
    std::set<MessageEvent> events;
    for (const auto& t : events_) events.insert(t.event);
    return {events.begin(), events.end()};
}

Result<TraceAutomaton> compile(const ChoreographyModel& model, std::size_t max_states) {
    if (auto defects = validate_choreography(model); !defects.empty()) {
        return Result<TraceAutomaton>::failure(std::move(defects));
    }
    return Compiler(model, max_states).run();
}

namespace {

void close_over_epsilon(const TraceAutomaton& a, std::vector<bool>& in_set, std::vector<StateId>& states) {
    std::vector<StateId> work = states;
    while (!work.empty()) {
        const StateId s = work.back();
        work.pop_back();
        for (auto idx : a.epsilons_from(s)) {
            const StateId t = a.epsilon_transitions()[idx].to;
            if (!in_set[t]) {
                in_set[t] = true;
                states.push_back(t);
                work.push_back(t);
            }
        }
    }
}

}  // namespace

bool accepts(const TraceAutomaton& automaton, std::span<const MessageEvent> trace) {
    if (automaton.state_count() == 0) return false;
    std::vector<bool> in_set(automaton.state_count(), false);
    std::vector<StateId> current{automaton.initial()};
    in_set[automaton.initial()] = true;
    close_over_epsilon(automaton, in_set, current);

    for (const auto& event : trace) {
        std::vector<bool> next_set(automaton.state_count(), false);
        std::vector<StateId> next;
        for (StateId s : current) {
            for (auto idx : automaton.events_from(s)) {
                const auto& t = automaton.transitions()[idx];
                if (t.event == event && !next_set[t.to]) {
                    next_set[t.to] = true;
                    next.push_back(t.to);
                }
            }
        }
        if (next.empty()) return false;
        close_over_epsilon(automaton, next_set, next);
        current = std::move(next);
        in_set = std::move(next_set);
    }
    return std::any_of(current.begin(), current.end(), [&](StateId s) { return automaton.is_accepting(s); });
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

class Enumerator {
public:
    Enumerator(const TraceAutomaton& a, const EnumerationBounds& b)
        : a_(a), bounds_(b), counts_(a.edge_tags().size(), 0), alphabet_(a.alphabet()) {
        coreachable_.assign(a.state_count(), false);
        std::vector<std::vector<StateId>> preds(a.state_count());
        for (const auto& t : a.transitions()) preds[t.to].push_back(t.from);
        for (const auto& t : a.epsilon_transitions()) preds[t.to].push_back(t.from);
        std::vector<StateId> work = a.accepting_states();
        for (StateId s : work) coreachable_[s] = true;
        while (!work.empty()) {
            const StateId s = work.back();
            work.pop_back();
            for (StateId p : preds[s]) {
                if (!coreachable_[p]) {
                    coreachable_[p] = true;
                    work.push_back(p);
                }
            }
        }
    }

    EnumerationResult run() {
        if (a_.state_count() != 0 && coreachable_[a_.initial()]) visit(a_.initial());
        return EnumerationResult{{found_.begin(), found_.end()}, truncated_};
    }

private:
    bool within_bound(const std::vector<EdgeTag>& tags) const {
        return std::all_of(tags.begin(), tags.end(),
                           [&](EdgeTag t) { return counts_[t] < bounds_.loop_bound; });
    }
    void bump(const std::vector<EdgeTag>& tags, int delta) {
        for (EdgeTag t : tags) counts_[t] = static_cast<std::uint32_t>(static_cast<int>(counts_[t]) + delta);
    }

    std::uint32_t event_id(const MessageEvent& e) const {
        return static_cast<std::uint32_t>(std::lower_bound(alphabet_.begin(), alphabet_.end(), e) -
                                          alphabet_.begin());
    }

    void record() {
        found_.insert(trace_);
        if (found_.size() > bounds_.max_traces) {
            found_.erase(std::prev(found_.end()));
            truncated_ = true;
            stop_ = true;
        }
    }

    void visit(StateId s) {
        if (stop_) return;
        std::vector<std::uint32_t> key;
        key.reserve(1 + counts_.size() + trace_ids_.size());
        key.push_back(s);
        key.insert(key.end(), counts_.begin(), counts_.end());
        key.insert(key.end(), trace_ids_.begin(), trace_ids_.end());
        if (!seen_.insert(std::move(key)).second) return;

        if (a_.is_accepting(s)) record();

        for (auto idx : a_.epsilons_from(s)) {
            const auto& t = a_.epsilon_transitions()[idx];
            if (!coreachable_[t.to] || !within_bound(t.traversed)) continue;
            bump(t.traversed, +1);
            visit(t.to);
            bump(t.traversed, -1);
            if (stop_) return;
        }
        for (auto idx : a_.events_from(s)) {
            const auto& t = a_.transitions()[idx];
            if (!coreachable_[t.to] || !within_bound(t.traversed)) continue;
            if (trace_.size() >= bounds_.max_trace_len) {
                truncated_ = true;
                continue;
            }
            bump(t.traversed, +1);
            trace_.push_back(t.event);
            trace_ids_.push_back(event_id(t.event));
            visit(t.to);
            trace_ids_.pop_back();
            trace_.pop_back();
            bump(t.traversed, -1);
            if (stop_) return;
        }
    }

    const TraceAutomaton& a_;
    EnumerationBounds bounds_;
    std::vector<std::uint32_t> counts_;
    std::vector<MessageEvent> alphabet_;
    std::vector<bool> coreachable_;
    Trace trace_;
    std::vector<std::uint32_t> trace_ids_;
    std::unordered_set<std::vector<std::uint32_t>, KeyHash> seen_;
    std::set<Trace, ShortlexLess> found_;
    bool truncated_ = false;
    bool stop_ = false;
};

}  // namespace

EnumerationResult enumerate_traces(const TraceAutomaton& automaton, const EnumerationBounds& bounds) {
    return Enumerator(automaton, bounds).run();
}

}  // namespace chorgate::semantics
