#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "chorgate/core/trace.hpp"

#ifndef CHORGATE_FIXTURE_DIR
#error "CHORGATE_FIXTURE_DIR must point at the fixtures directory"
#endif

namespace chorgate::testing {

inline std::string fixture_path(const std::string& name) { return std::string(CHORGATE_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline MessageEvent ev(std::string m, std::string from, std::string to) {
    return MessageEvent{std::move(m), std::move(from), std::move(to)};
}

}  // namespace chorgate::testing
