#include "udc/rational.hpp"

#include <cctype>

#include "udc/error.hpp"

namespace udc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DivisionByBottom: return "DivisionByBottom";
        case ErrorCode::UnboundVariable: return "UnboundVariable";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UndeclaredName: return "UndeclaredName";
        case ErrorCode::NonIntegerExponent: return "NonIntegerExponent";
        case ErrorCode::InvalidMap: return "InvalidMap";
        case ErrorCode::NotSubtractionFree: return "NotSubtractionFree";
        case ErrorCode::ZeroAssignment: return "ZeroAssignment";
        case ErrorCode::OverflowAtEpsilon: return "OverflowAtEpsilon";
        case ErrorCode::DivisionByZeroSeries: return "DivisionByZeroSeries";
        case ErrorCode::IndeterminateLeadingTerm: return "IndeterminateLeadingTerm";
        case ErrorCode::IndeterminateValuation: return "IndeterminateValuation";
        case ErrorCode::DivisionByZeroFunction: return "DivisionByZeroFunction";
        case ErrorCode::ZeroFunction: return "ZeroFunction";
        case ErrorCode::IndeterminateOrbit: return "IndeterminateOrbit";
        case ErrorCode::SignMismatch: return "SignMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

std::string to_string(const Rational& r) {
    return r.get_str();
}

Rational parse_rational(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    std::string s(text.substr(b, e - b));

    auto fail = [&] { return Error(ErrorCode::InvalidArgument, "not a rational: '" + s + "'"); };

    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    std::size_t digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    if (digits == 0) throw fail();
    if (i < s.size()) {
        if (s[i] != '/') throw fail();
        ++i;
        std::size_t den_digits = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++den_digits;
        if (den_digits == 0 || i != s.size()) throw fail();
    }
    if (s[0] == '+') s.erase(0, 1);

    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0) throw fail();
    r.canonicalize();
    return r;
}

double to_double(const Rational& r) {
    return r.get_d();
}

bool is_integer(const Rational& r) {
    return r.get_den() == 1;
}

}  // namespace udc
