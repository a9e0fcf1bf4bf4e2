#pragma once

#include <gmpxx.h>

#include <functional>
#include <string>
#include <string_view>

namespace udc {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Canonical `p/q` text (or `p` when the denominator is 1).
std::string to_string(const Rational& r);

// Accepts `p`, `-p`, `p/q`, `-p/q` with optional surrounding whitespace.
// Throws Error(InvalidArgument) on anything else.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

bool is_integer(const Rational& r);

}  // namespace udc
