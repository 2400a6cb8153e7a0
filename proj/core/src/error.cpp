#include "kaczlab/error.hpp"

namespace kaczlab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::DegenerateMatrix: return "DegenerateMatrix";
        case ErrorKind::ZeroRow: return "ZeroRow";
        case ErrorKind::DegenerateRow: return "DegenerateRow";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + message), line_(line) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace kaczlab
