#pragma once

#include <compare>
#include <string>
#include <tuple>
#include <vector>

namespace chorgate {

/// A single message exchange. Identity for matching is the full triple.
struct MessageEvent {
    std::string message;
    std::string sender;
    std::string receiver;

    friend bool operator==(const MessageEvent&, const MessageEvent&) = default;
    friend auto operator<=>(const MessageEvent& a, const MessageEvent& b) {
        return std::tie(a.message, a.sender, a.receiver) <=>
               std::tie(b.message, b.sender, b.receiver);
    }
};

using Trace = std::vector<MessageEvent>;

/// Shortlex: shorter traces first, then lexicographic over event triples.
struct ShortlexLess {
    bool operator()(const Trace& a, const Trace& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

std::string to_string(const MessageEvent& e);
std::string to_string(const Trace& t);

}  // namespace chorgate
