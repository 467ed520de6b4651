#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chorgate/core/choreography.hpp"
#include "chorgate/core/diagnostic.hpp"
#include "chorgate/core/trace.hpp"

namespace chorgate::semantics {

using StateId = std::uint32_t;

/// Identifies what a transition traverses for loop bounding: either a sequence
/// flow of the source model or one execution of a looping task's body.
using EdgeTag = std::uint32_t;

struct EventTransition {
    StateId from = 0;
    MessageEvent event;
    std::string link;  // MessageLink id that produced the event
    StateId to = 0;
    std::vector<EdgeTag> traversed;
};

struct EpsilonTransition {
    StateId from = 0;
    StateId to = 0;
    std::vector<EdgeTag> traversed;
};

/// Finite acceptor over message events; its language is the set of complete
/// message traces of a choreography model.
class TraceAutomaton {
public:
    std::size_t state_count() const { return accepting_.size(); }
    StateId initial() const { return 0; }
    bool is_accepting(StateId s) const { return accepting_.at(s); }
    std::vector<StateId> accepting_states() const;

    std::span<const EventTransition> transitions() const { return events_; }
    std::span<const EpsilonTransition> epsilon_transitions() const { return epsilons_; }

    /// Indices into transitions() / epsilon_transitions() leaving a state.
    std::span<const std::uint32_t> events_from(StateId s) const { return event_index_.at(s); }
    std::span<const std::uint32_t> epsilons_from(StateId s) const { return epsilon_index_.at(s); }

    /// Human-readable names of the edge tags (sequence flow ids, "loop:<task>").
    const std::vector<std::string>& edge_tags() const { return tag_names_; }

    /// Events usable by some transition, sorted and unique.
    std::vector<MessageEvent> alphabet() const;

private:
    friend class Compiler;

    std::vector<bool> accepting_;
    std::vector<EventTransition> events_;
    std::vector<EpsilonTransition> epsilons_;
    std::vector<std::vector<std::uint32_t>> event_index_;
    std::vector<std::vector<std::uint32_t>> epsilon_index_;
    std::vector<std::string> tag_names_;
};

struct EnumerationBounds {
    std::size_t loop_bound = 2;      // traversals of any one flow (or loop body) per path
    std::size_t max_trace_len = 64;  // events per trace
    std::size_t max_traces = 10000;  // size of the result set
};

struct EnumerationResult {
    std::vector<Trace> traces;  // shortlex order
    bool truncated = false;
};

/// Token-game semantics over a well-formed model. Errors: UnsupportedStructure
/// when a sequence flow could hold two tokens at once (a parallel split not
/// closed by a matching join) or the state space exceeds max_states.
Result<TraceAutomaton> compile(const ChoreographyModel& model, std::size_t max_states = 200000);

/// Membership by state-set simulation; handles cycles without enumeration.
bool accepts(const TraceAutomaton& automaton, std::span<const MessageEvent> trace);

/// Every accepted trace whose path stays within the bounds. truncated is set
/// when the length or result cap cut off something that could still accept.
EnumerationResult enumerate_traces(const TraceAutomaton& automaton, const EnumerationBounds& bounds = {});

}  // namespace chorgate::semantics
