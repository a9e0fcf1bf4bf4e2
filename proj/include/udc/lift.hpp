#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "udc/mapdsl.hpp"
#include "udc/puiseux.hpp"

namespace udc {

/// Signed monomial c*z^q used to lift a tropical value Q (with sign c).
struct Monomial {
    Rational coeff = 1;
    Rational exponent = 0;
};

using LiftSpec = std::variant<Monomial, PuiseuxSeries>;

inline constexpr long kDefaultWindowDepth = 64;

/// A rational map lifted to the Puiseux field: parameters are fixed series and
/// the updates are evaluated with every intermediate result truncated to the
/// window depth.
class LiftedMap {
public:
    LiftedMap(RationalMap map, std::map<std::string, PuiseuxSeries, std::less<>> params, Rational depth);

    const RationalMap& map() const { return map_; }
    const Rational& depth() const { return depth_; }
    const std::map<std::string, PuiseuxSeries, std::less<>>& params() const { return params_; }

    std::vector<PuiseuxSeries> step(const std::vector<PuiseuxSeries>& state) const;
    PuiseuxSeries evaluate(const Expr& e, const std::vector<PuiseuxSeries>& state) const;

private:
    RationalMap map_;
    std::map<std::string, PuiseuxSeries, std::less<>> params_;
    Rational depth_;
};

struct LiftResult {
    LiftedMap map;
    std::vector<PuiseuxSeries> initial;
};

/// Lifts a map: every parameter and state variable must be assigned (keys may
/// be the rational name or, for parameters, the tropical alias). A monomial
/// with coefficient 0 throws ZeroAssignment; pass the zero series explicitly
/// instead.
LiftResult lift(const RationalMap& m, const std::map<std::string, LiftSpec, std::less<>>& assign,
                Rational depth = Rational(kDefaultWindowDepth));

PuiseuxSeries to_series(const LiftSpec& spec);

/// Evaluates any rational expression over the Puiseux field with the given
/// variable bindings (truncating intermediates to `depth`).
PuiseuxSeries evaluate_series(const Expr& e, const std::map<std::string, PuiseuxSeries, std::less<>>& env,
                              const Rational& depth);

}  // namespace udc
