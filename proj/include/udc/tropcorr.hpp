#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "udc/lift.hpp"
#include "udc/mapdsl.hpp"
#include "udc/maxplus.hpp"
#include "udc/puiseux.hpp"
#include "udc/ultra.hpp"

namespace udc {

// ---------------------------------------------------------------------------
// Univariate polynomials.

/// Polynomial in one symbol with Puiseux-series coefficients, index = degree.
/// Trailing exact zeros are trimmed on construction; the zero polynomial has
/// no coefficients.
class PuiseuxPoly {
public:
    PuiseuxPoly() = default;
    explicit PuiseuxPoly(std::vector<PuiseuxSeries> coeffs);

    static PuiseuxPoly constant(const PuiseuxSeries& c) { return PuiseuxPoly({c}); }
    static PuiseuxPoly x() { return PuiseuxPoly({PuiseuxSeries::zero(), PuiseuxSeries::constant(1)}); }

    const std::vector<PuiseuxSeries>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }

    friend bool operator==(const PuiseuxPoly&, const PuiseuxPoly&) = default;

private:
    std::vector<PuiseuxSeries> c_;
};

PuiseuxPoly poly_add(const PuiseuxPoly& a, const PuiseuxPoly& b);
PuiseuxPoly poly_neg(const PuiseuxPoly& a);
PuiseuxPoly poly_mul(const PuiseuxPoly& a, const PuiseuxPoly& b);

/// Expands prod_j (x - r_j).
PuiseuxPoly poly_from_roots(const std::vector<PuiseuxSeries>& roots);

std::string to_string(const PuiseuxPoly& p, const std::string& symbol = "x");

/// Tropical polynomial max_i (C_i + i*X); index = degree.
struct TropicalPoly {
    std::vector<TropicalValue> coeffs;

    TropicalValue operator()(const TropicalValue& x) const;
    friend bool operator==(const TropicalPoly&, const TropicalPoly&) = default;
};

std::string to_string(const TropicalPoly& p);

/// Coefficient-wise valuation. Throws IndeterminateValuation naming the degree.
TropicalPoly tropicalize_poly(const PuiseuxPoly& p);

/// Tropical roots with multiplicity, ascending (-inf first). Uses the upper
/// hull of (i, C_i). Degree-0 or -inf top coefficient throws InvalidArgument.
std::vector<TropicalValue> trop_roots(const TropicalPoly& p);

/// Root valuations read off the Newton polygon of p, ascending with
/// multiplicity. Degree 0 throws InvalidArgument.
std::vector<TropicalValue> newton_valuations(const PuiseuxPoly& p);

// ---------------------------------------------------------------------------
// Roots of numerator/denominator against non-differentiable points.

struct Lemma3Report {
    std::vector<TropicalValue> num_trop_roots;
    std::vector<TropicalValue> num_newton;
    std::vector<TropicalValue> den_trop_roots;
    std::vector<TropicalValue> den_newton;
    bool kapranov_ok = false;
    std::vector<TropicalValue> root_set;  // distinct values of both root multisets, ascending
    std::vector<TropicalValue> shared;    // values that are roots of both
    std::vector<TropicalValue> nd;        // nd_points of F as values, ascending
    bool nd_matches = false;              // nd == root_set exactly
    bool passed = false;                  // kapranov_ok and nd agrees up to shared roots
    std::vector<std::string> warnings;
};

/// Degree-0 numerator or denominator contributes no roots.
Lemma3Report lemma3_check(const PuiseuxPoly& num, const PuiseuxPoly& den, const PiecewiseLinearFn& f);

/// Rational function of one free variable, numerator and denominator kept
/// unreduced.
struct PolyFraction {
    PuiseuxPoly num;
    PuiseuxPoly den;
};

struct Lemma3Step {
    std::size_t n = 0;
    std::string coordinate;
    PolyFraction fraction;
    PiecewiseLinearFn tropical;
    Lemma3Report report;
};

/// Iterates the lifted map with `free` as an indeterminate (all other state
/// variables and parameters from `assign`) and the ultradiscretized map as
/// piecewise-linear functions of the free tropical coordinate, then checks
/// every coordinate of every iterate.
std::vector<Lemma3Step> lemma3_orbit(const RationalMap& m, const std::map<std::string, LiftSpec, std::less<>>& assign,
                                     const std::string& free, std::size_t steps);

// ---------------------------------------------------------------------------
// Orbit valuation against tropical orbit.

struct CorrespondenceEntry {
    std::string coordinate;
    std::optional<PuiseuxSeries> lifted;      // empty once the lifted orbit stopped
    std::optional<TropicalValue> valuation;   // empty when indeterminate or stopped
    TropicalValue tropical;
    bool equal = false;
    std::string note;  // "window exhausted", a stop reason, or empty
};

struct CorrespondenceStep {
    std::size_t n = 0;
    std::vector<CorrespondenceEntry> entries;
    bool all_equal() const;
};

struct CorrespondenceReport {
    std::vector<std::string> coordinates;
    std::vector<CorrespondenceStep> steps;
    std::optional<std::size_t> first_divergence;  // state step
    /// For shift maps: W_n from valuations and from the tropical orbit.
    bool scalar = false;
    std::vector<std::optional<TropicalValue>> scalar_valuations;
    std::vector<TropicalValue> scalar_tropical;
    std::optional<std::size_t> first_scalar_divergence;
    /// Valuation states at equal steps satisfy the tropical map.
    bool recurrence_consistent = true;
    std::vector<std::string> notes;

    bool equal() const { return !first_divergence; }
};

CorrespondenceReport orbit_compare(const RationalMap& m, const std::map<std::string, LiftSpec, std::less<>>& assign,
                                   std::size_t steps, const Rational& depth = Rational(kDefaultWindowDepth));

}  // namespace udc
