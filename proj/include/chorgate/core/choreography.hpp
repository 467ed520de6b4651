#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chorgate/core/diagnostic.hpp"
#include "chorgate/core/trace.hpp"

namespace chorgate {

enum class NodeKind { start_event, end_event, choreography_task, exclusive_gateway, parallel_gateway };

const char* to_string(NodeKind k);

struct LoopMarker {
    bool test_before = false;

    friend bool operator==(const LoopMarker&, const LoopMarker&) = default;
};

struct Node {
    std::string id;
    NodeKind kind = NodeKind::choreography_task;
    std::string name;
    // Task-only fields.
    std::string initiating_link;
    std::optional<std::string> return_link;
    std::optional<LoopMarker> loop;

    bool is_task() const { return kind == NodeKind::choreography_task; }
    bool is_gateway() const {
        return kind == NodeKind::exclusive_gateway || kind == NodeKind::parallel_gateway;
    }

    friend bool operator==(const Node&, const Node&) = default;
};

struct SequenceFlow {
    std::string id;
    std::string source;
    std::string target;

    friend bool operator==(const SequenceFlow&, const SequenceFlow&) = default;
};

/// (t, p_s, p_r, a_s, a_r). Choreography tasks are atomic, so both activities
/// name the owning task.
struct MessageLink {
    std::string id;
    std::string message;
    std::string sender;
    std::string receiver;
    std::string sending_activity;
    std::string receiving_activity;

    MessageEvent event() const { return {message, sender, receiver}; }

    friend bool operator==(const MessageLink&, const MessageLink&) = default;
};

struct ChoreographyModel {
    std::string name;
    std::vector<std::string> participants;  // sorted, unique
    std::vector<Node> nodes;
    std::vector<SequenceFlow> flows;
    std::vector<MessageLink> links;

    const Node* find_node(const std::string& id) const;
    const MessageLink* find_link(const std::string& id) const;

    friend bool operator==(const ChoreographyModel&, const ChoreographyModel&) = default;
};

/// Structural and link checks; an empty result means the model is well formed.
/// Codes: DuplicateId, DanglingFlowRef, DuplicateFlow, MissingStartEvent, MultipleStartEvents,
/// MissingEndEvent, BadEventArity, BadTaskArity, BadGatewayArity, OrphanNode, DanglingLinkRef,
/// SelfMessage, UnknownParticipant, UnreferencedLink, SharedLink, ActivityMismatch.
Diagnostics validate_choreography(const ChoreographyModel& model);

/// Convenience construction for programmatic models. Ids are generated when omitted;
/// participants are collected from the events.
class ChoreographyBuilder {
public:
    explicit ChoreographyBuilder(std::string name);

    std::string start(std::string id = {});
    std::string end(std::string id = {});
    std::string exclusive(std::string id = {});
    std::string parallel(std::string id = {});
    std::string task(const MessageEvent& initiating,
                     std::optional<MessageEvent> ret = std::nullopt,
                     std::optional<LoopMarker> loop = std::nullopt, std::string id = {});
    std::string flow(const std::string& source, const std::string& target, std::string id = {});
    void add_participant(const std::string& name);

    ChoreographyModel build() const;

private:
    std::string next_id(const char* prefix);
    std::string add_link(const MessageEvent& e, const std::string& task_id);

    ChoreographyModel model_;
    std::size_t counter_ = 0;
};

}  // namespace chorgate
