#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "udc/maxplus.hpp"
#include "udc/rational.hpp"

namespace udc {

struct SeriesTerm {
    Rational exponent;
    Rational coeff;

    friend bool operator==(const SeriesTerm&, const SeriesTerm&) = default;
};

/// Truncated Puiseux series in one indeterminate z with exact rational
/// coefficients, stored by DESCENDING exponent. The valuation is the largest
/// exponent carrying a nonzero coefficient.
///
/// A threshold tau means every coefficient at exponent >= tau is known; the
/// unknown remainder lives strictly below tau. No threshold means the series
/// is exact.
class PuiseuxSeries {
public:
    PuiseuxSeries() = default;  // exact zero

    static PuiseuxSeries zero() { return {}; }
    static PuiseuxSeries constant(const Rational& c);
    static PuiseuxSeries monomial(const Rational& coeff, const Rational& exponent);
    /// Normalizes: merges equal exponents, drops zeros and terms below tau.
    static PuiseuxSeries from_terms(std::vector<SeriesTerm> terms, std::optional<Rational> threshold = std::nullopt);

    const std::vector<SeriesTerm>& terms() const { return terms_; }
    const std::optional<Rational>& threshold() const { return threshold_; }

    bool is_exact() const { return !threshold_; }
    bool is_exact_zero() const { return terms_.empty() && !threshold_; }
    /// No term survives but the remainder is unknown: the leading term is lost.
    bool is_indeterminate() const { return terms_.empty() && threshold_.has_value(); }

    friend bool operator==(const PuiseuxSeries&, const PuiseuxSeries&) = default;

private:
    std::vector<SeriesTerm> terms_;
    std::optional<Rational> threshold_;
};

PuiseuxSeries ps_add(const PuiseuxSeries& f, const PuiseuxSeries& g);
PuiseuxSeries ps_neg(const PuiseuxSeries& f);
PuiseuxSeries ps_sub(const PuiseuxSeries& f, const PuiseuxSeries& g);
PuiseuxSeries ps_mul(const PuiseuxSeries& f, const PuiseuxSeries& g);

/// 1/f expanded as c^-1 z^-v sum (-u)^k where f = c z^v (1 + u); keeps every
/// exponent >= -v(f) - depth. Throws DivisionByZeroSeries for exact zero and
/// IndeterminateLeadingTerm when no term of f is known.
PuiseuxSeries ps_inv(const PuiseuxSeries& f, const Rational& depth);
PuiseuxSeries ps_div(const PuiseuxSeries& f, const PuiseuxSeries& g, const Rational& depth);

/// Integer power; negative exponents go through ps_inv.
PuiseuxSeries ps_pow(const PuiseuxSeries& f, long k, const Rational& depth);

/// Drops terms more than `depth` below the leading exponent and raises the
/// threshold accordingly. Series without terms are returned unchanged.
PuiseuxSeries ps_truncate(const PuiseuxSeries& f, const Rational& depth);

/// Largest exponent with nonzero coefficient; -inf for exact zero.
/// Throws IndeterminateValuation when f has no known term but is not exact.
TropicalValue valuation(const PuiseuxSeries& f);

Rational leading_coeff(const PuiseuxSeries& f);

/// `c*z^(q)` terms joined by ` + `, followed by ` + O(z^(tau))` when
/// truncated; the exact zero renders as `0`.
std::string to_string(const PuiseuxSeries& f);

/// Parses the rendering above. Also accepts shorthand such as `-z^(1/64)`,
/// `z`, `3/4`, `2*z^-1`.
PuiseuxSeries parse_puiseux(std::string_view text);

}  // namespace udc
