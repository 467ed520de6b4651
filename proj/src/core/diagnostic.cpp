#include "chorgate/core/diagnostic.hpp"

#include <sstream>

namespace chorgate {

std::string format_diagnostic(const Diagnostic& d, const std::string& source) {
    std::ostringstream os;
    os << (d.is_error() ? "error" : "warning") << '[' << d.code << ']';
    if (!source.empty()) {
        os << ' ' << source;
        if (d.line != 0) os << ':' << d.line;
    } else if (d.line != 0) {
        os << " line " << d.line;
    }
    if (!d.location.empty()) os << ' ' << d.location;
    os << ": " << d.message;
    return os.str();
}

}  // namespace chorgate
