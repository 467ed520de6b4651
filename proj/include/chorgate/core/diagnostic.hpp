#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chorgate {

enum class Severity { error, warning };

/// One finding produced by a parser, validator or pipeline stage.
struct Diagnostic {
    Severity severity = Severity::error;
    std::string code;      // stable identifier, e.g. "DanglingReference"
    std::string origin;    // producing module: core, bpmn, requirements, semantics, conformance
    std::string location;  // element path, JSON pointer or entity id
    std::size_t line = 0;  // 1-based; 0 when unknown
    std::string message;

    bool is_error() const { return severity == Severity::error; }
    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline Diagnostic make_error(std::string origin, std::string code, std::string location,
                             std::string message, std::size_t line = 0) {
    return Diagnostic{Severity::error, std::move(code), std::move(origin), std::move(location),
                      line, std::move(message)};
}

inline Diagnostic make_warning(std::string origin, std::string code, std::string location,
                               std::string message, std::size_t line = 0) {
    return Diagnostic{Severity::warning, std::move(code), std::move(origin), std::move(location),
                      line, std::move(message)};
}

inline bool has_errors(const Diagnostics& diags) {
    for (const auto& d : diags) {
        if (d.is_error()) return true;
    }
    return false;
}

/// "code location: message" one-liner used by exceptions and the CLI.
std::string format_diagnostic(const Diagnostic& d, const std::string& source = {});

class BadResultAccess : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A value or the errors that prevented it. Warnings may accompany either.
template <class T>
class Result {
public:
    static Result success(T value, Diagnostics warnings = {}) {
        Result r;
        r.value_ = std::move(value);
        r.diagnostics_ = std::move(warnings);
        return r;
    }

    static Result failure(Diagnostics diagnostics) {
        Result r;
        r.diagnostics_ = std::move(diagnostics);
        return r;
    }

    bool ok() const { return value_.has_value(); }
    explicit operator bool() const { return ok(); }

    const T& value() const& {
        if (!value_) throw BadResultAccess("Result holds no value");
        return *value_;
    }
    T&& value() && {
        if (!value_) throw BadResultAccess("Result holds no value");
        return std::move(*value_);
    }

    const Diagnostics& diagnostics() const { return diagnostics_; }

private:
    std::optional<T> value_;
    Diagnostics diagnostics_;
};

}  // namespace chorgate
