#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "chorgate/core/trace.hpp"

namespace chorgate {

enum class Polarity { expected_valid, expected_invalid };

const char* to_string(Polarity p);

struct ScenarioElement;

/// Bounded repetition of a sub-sequence.
struct Loop {
    std::size_t min_reps = 0;
    std::size_t max_reps = 0;
    std::vector<ScenarioElement> body;

    friend bool operator==(const Loop&, const Loop&) = default;
};

struct ScenarioElement {
    std::variant<MessageEvent, Loop> node;

    ScenarioElement() = default;
    ScenarioElement(MessageEvent e) : node(std::move(e)) {}
    ScenarioElement(Loop l) : node(std::move(l)) {}

    bool is_interaction() const { return std::holds_alternative<MessageEvent>(node); }

    friend bool operator==(const ScenarioElement&, const ScenarioElement&) = default;
};

struct Scenario {
    std::string id;
    std::string requirement;
    Polarity polarity = Polarity::expected_valid;
    std::vector<ScenarioElement> body;
    std::string description;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Every interaction in pre-order, loops flattened once.
std::vector<MessageEvent> interactions_of(const Scenario& s);

}  // namespace chorgate
