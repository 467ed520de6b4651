#pragma once

// Random block-structured choreographies for property tests: tasks (one- or
// two-way, optionally looping), sequences, exclusive and parallel blocks, and
// exclusive-gateway cycles.

#include <optional>
#include <random>
#include <string>

#include "chorgate/core/choreography.hpp"

namespace chorgate::testing {

class RandomModelGenerator {
public:
    explicit RandomModelGenerator(std::uint32_t seed) : rng_(seed) {}

    /// A well-formed model with at most max_nodes nodes, start and end included.
    ChoreographyModel generate(int max_nodes = 8) {
        ChoreographyBuilder b("random");
        const auto s = b.start();
        const int budget = pick(1, max_nodes - 2);
        const auto frag = block(b, budget);
        const auto e = b.end();
        b.flow(s, frag.entry);
        b.flow(frag.exit, e);
        return b.build();
    }

    MessageEvent random_event() {
        static const char* messages[] = {"a", "b", "c"};
        static const char* parties[] = {"p", "q", "r"};
        const int from = pick(0, 2);
        const int to = (from + pick(1, 2)) % 3;
        return MessageEvent{messages[pick(0, 2)], parties[from], parties[to]};
    }

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::mt19937& rng() { return rng_; }

private:
    struct Fragment {
        std::string entry;
        std::string exit;
        int used = 0;
    };

    Fragment block(ChoreographyBuilder& b, int budget) {
        std::vector<int> kinds{0};  // task
        if (budget >= 2) kinds.push_back(1);  // sequence
        if (budget >= 3) kinds.push_back(4);  // xor cycle
        if (budget >= 4) {
            kinds.push_back(2);  // xor block
            kinds.push_back(3);  // and block
        }
        switch (kinds[static_cast<std::size_t>(pick(0, static_cast<int>(kinds.size()) - 1))]) {
            case 1: {
                auto first = block(b, pick(1, budget - 1));
                auto second = block(b, budget - first.used);
                b.flow(first.exit, second.entry);
                return {first.entry, second.exit, first.used + second.used};
            }
            case 2:
            case 3: {
                const bool exclusive = pick(0, 1) == 0;
                const auto split = exclusive ? b.exclusive() : b.parallel();
                auto left = block(b, pick(1, budget - 3));
                auto right = block(b, budget - 2 - left.used);
                const auto join = exclusive ? b.exclusive() : b.parallel();
                b.flow(split, left.entry);
                b.flow(split, right.entry);
                b.flow(left.exit, join);
                b.flow(right.exit, join);
                return {split, join, 2 + left.used + right.used};
            }
            case 4: {
                const auto merge = b.exclusive();
                auto inner = block(b, budget - 2);
                const auto split = b.exclusive();
                b.flow(merge, inner.entry);
                b.flow(inner.exit, split);
                b.flow(split, merge);
                // entry must be the merge; the caller wires its other incoming flow
                return {merge, split, 2 + inner.used};
            }
            default: {
                std::optional<MessageEvent> ret;
                std::optional<LoopMarker> loop;
                if (pick(0, 3) == 0) ret = random_event();
                if (pick(0, 4) == 0) loop = LoopMarker{pick(0, 1) == 1};
                const auto id = b.task(random_event(), ret, loop);
                return {id, id, 1};
            }
        }
    }

    std::mt19937 rng_;
};

}  // namespace chorgate::testing
