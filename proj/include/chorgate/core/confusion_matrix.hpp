#pragma once

#include <cstdint>

namespace chorgate {

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;

    std::uint64_t expected_valid() const { return tp + fn; }
    std::uint64_t expected_invalid() const { return fp + tn; }
    std::uint64_t total() const { return tp + fn + fp + tn; }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

}  // namespace chorgate
