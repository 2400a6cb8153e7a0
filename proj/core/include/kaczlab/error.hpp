/**
 * @file error.hpp
 * @brief Error kinds raised by kaczlab operations.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kaczlab {

enum class ErrorKind {
    InvalidInput,
    NumericalFailure,
    DegenerateMatrix,
    ZeroRow,
    DegenerateRow,
    ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure reported by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Malformed problem file; carries the 1-based line where parsing stopped.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace kaczlab
