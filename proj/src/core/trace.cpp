#include "chorgate/core/scenario.hpp"
#include "chorgate/core/trace.hpp"

namespace chorgate {

std::string to_string(const MessageEvent& e) {
    return e.sender + "->" + e.receiver + ":" + e.message;
}

std::string to_string(const Trace& t) {
    std::string out = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i != 0) out += ", ";
        out += to_string(t[i]);
    }
    out += "]";
    return out;
}

const char* to_string(Polarity p) {
    return p == Polarity::expected_valid ? "valid" : "invalid";
}

namespace {

void collect(const std::vector<ScenarioElement>& body, std::vector<MessageEvent>& out) {
    for (const auto& el : body) {
        if (const auto* e = std::get_if<MessageEvent>(&el.node)) {
            out.push_back(*e);
        } else {
            collect(std::get<Loop>(el.node).body, out);
        }
    }
}

}  // namespace

std::vector<MessageEvent> interactions_of(const Scenario& s) {
    std::vector<MessageEvent> out;
    collect(s.body, out);
    return out;
}

}  // namespace chorgate
