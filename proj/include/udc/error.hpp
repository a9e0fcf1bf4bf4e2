#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace udc {

enum class ErrorCode {
    DivisionByBottom,
    UnboundVariable,
    SyntaxError,
    UndeclaredName,
    NonIntegerExponent,
    InvalidMap,
    NotSubtractionFree,
    ZeroAssignment,
    OverflowAtEpsilon,
    DivisionByZeroSeries,
    IndeterminateLeadingTerm,
    IndeterminateValuation,
    DivisionByZeroFunction,
    ZeroFunction,
    IndeterminateOrbit,
    SignMismatch,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code so callers (and tests)
// can dispatch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace udc
