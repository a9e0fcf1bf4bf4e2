#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "udc/mapdsl.hpp"
#include "udc/maxplus.hpp"

namespace udc {

// ---------------------------------------------------------------------------
// One-sided first-order jets: base + slope*d for an infinitesimal d of fixed sign.

enum class JetSign { Plus, Minus };

std::string to_string(JetSign s);

class SignedJet {
public:
    SignedJet(TropicalValue base, Rational slope, JetSign sign);

    const TropicalValue& base() const { return base_; }
    const Rational& slope() const { return slope_; }
    JetSign sign() const { return sign_; }

    /// Plain value at a concrete d (of the jet's sign).
    TropicalValue at(const Rational& d) const;

    friend bool operator==(const SignedJet&, const SignedJet&) = default;

private:
    TropicalValue base_;
    Rational slope_;
    JetSign sign_;
};

/// Max compares bases; on a tie the plus side keeps the larger slope and the
/// minus side the smaller one. Mixed signs throw SignMismatch.
SignedJet jet_max(const SignedJet& a, const SignedJet& b);
SignedJet jet_plus(const SignedJet& a, const SignedJet& b);
/// Throws DivisionByBottom when b's base is -inf.
SignedJet jet_minus(const SignedJet& a, const SignedJet& b);
SignedJet jet_scale(long k, const SignedJet& a);

/// Renders `base + slope*sym`, e.g. `3 - d`, `d`, `-1/2 + 2*d`.
std::string to_string(const SignedJet& j, const std::string& symbol = "d");

// ---------------------------------------------------------------------------
// Large-parameter jets: base + coeff*L with L -> +inf, or -inf.

class LargeJet {
public:
    LargeJet() = default;  // -inf
    LargeJet(Rational coeff, Rational base) : finite_(true), coeff_(std::move(coeff)), base_(std::move(base)) {}

    static LargeJet neg_inf() { return {}; }
    static LargeJet constant(const TropicalValue& v);

    bool is_neg_inf() const { return !finite_; }
    const Rational& coeff() const { return coeff_; }
    const Rational& base() const { return base_; }

    /// Lexicographic on (coeff, base); -inf below everything.
    friend std::strong_ordering operator<=>(const LargeJet& a, const LargeJet& b);
    friend bool operator==(const LargeJet& a, const LargeJet& b);

private:
    bool finite_ = false;
    Rational coeff_;
    Rational base_;
};

LargeJet large_max(const LargeJet& a, const LargeJet& b);
LargeJet large_plus(const LargeJet& a, const LargeJet& b);
LargeJet large_minus(const LargeJet& a, const LargeJet& b);
LargeJet large_scale(long k, const LargeJet& a);

std::string to_string(const LargeJet& j, const std::string& symbol = "L");

// ---------------------------------------------------------------------------
// Continuous piecewise-linear functions of one real variable.

class PiecewiseLinearFn {
public:
    struct Knot {
        Rational x;
        Rational y;
        friend bool operator==(const Knot&, const Knot&) = default;
    };

    static PiecewiseLinearFn affine(const Rational& slope, const Rational& value_at_zero);
    static PiecewiseLinearFn constant(const Rational& c) { return affine(0, c); }
    static PiecewiseLinearFn identity() { return affine(1, 0); }
    static PiecewiseLinearFn bottom();  // identically -inf
    static PiecewiseLinearFn lift(const TropicalValue& v);
    /// Builds from knots (any order, duplicates allowed if consistent) and the
    /// two unbounded slopes, then canonicalizes.
    static PiecewiseLinearFn from_knots(std::vector<Knot> knots, Rational left_slope, Rational right_slope);

    bool is_bottom() const { return bottom_; }
    bool is_affine() const { return !bottom_ && breakpoints().empty(); }

    /// Points where the slope changes, ascending.
    std::vector<Rational> breakpoints() const;
    /// Slopes of the pieces, left to right (breakpoints().size() + 1 entries).
    std::vector<Rational> slopes() const;
    const Rational& left_slope() const { return left_; }
    const Rational& right_slope() const { return right_; }

    TropicalValue value_at(const Rational& x) const;
    Rational slope_left_of(const Rational& x) const;
    Rational slope_right_of(const Rational& x) const;

    const std::vector<Knot>& knots() const { return knots_; }

    friend bool operator==(const PiecewiseLinearFn&, const PiecewiseLinearFn&) = default;

private:
    bool bottom_ = false;
    std::vector<Knot> knots_;  // breakpoints, or a single anchor at x = 0 when affine
    Rational left_;
    Rational right_;

    Rational finite_value(const Rational& x) const;
};

PiecewiseLinearFn pl_max(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g);
PiecewiseLinearFn pl_plus(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g);
/// Throws DivisionByBottom when g is identically -inf.
PiecewiseLinearFn pl_minus(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g);
PiecewiseLinearFn pl_scale(long k, const PiecewiseLinearFn& f);

std::string to_string(const PiecewiseLinearFn& f);

struct NdSet {
    std::vector<Rational> finite;  // ascending
    bool neg_inf = false;

    friend bool operator==(const NdSet&, const NdSet&) = default;
};

/// Breakpoints, plus -inf when the leftmost piece has nonzero slope.
NdSet nd_points(const PiecewiseLinearFn& f);

std::string to_string(const NdSet& s);

// ---------------------------------------------------------------------------
// Orbits.

using JetState = std::vector<SignedJet>;
using LargeState = std::vector<LargeJet>;
using PlState = std::vector<PiecewiseLinearFn>;

/// Iterates the map from `point` with `point[perturbed] + d` in jet arithmetic.
std::vector<JetState> jet_orbit(const TropicalMap& m, const std::vector<TropicalValue>& point, const TropEnv& params,
                                std::size_t perturbed, JetSign sign, std::size_t steps);

/// Iterates the map with `point[coordinate] - L` in large-parameter arithmetic.
std::vector<LargeState> large_orbit(const TropicalMap& m, const std::vector<TropicalValue>& point, const TropEnv& params,
                                    std::size_t coordinate, std::size_t steps);

/// Every coordinate of every iterate as a piecewise-linear function of the
/// free coordinate, the others held at `point`.
std::vector<PlState> pl_orbit(const TropicalMap& m, const std::vector<TropicalValue>& point, const TropEnv& params,
                              std::size_t free, std::size_t steps);

/// For maps whose first update is a shift (X' = Y), the scalar sequence
/// W_0 = X_0, W_{n+1} = Y_n; empty otherwise.
bool is_shift_map(const TropicalMap& m);

template <class T>
std::vector<T> scalar_sequence(const std::vector<std::vector<T>>& states) {
    std::vector<T> w;
    if (states.empty() || states.front().size() < 2) return w;
    w.push_back(states.front()[0]);
    for (const auto& s : states) w.push_back(s[1]);
    return w;
}

struct CoordinateDifferentiability {
    SignedJet left;   // minus side
    SignedJet right;  // plus side
    bool differentiable = false;
};

struct UltraStep {
    std::size_t n = 0;
    std::vector<CoordinateDifferentiability> coords;
    bool all_differentiable() const;
};

struct UltraConfinementReport {
    std::vector<std::string> coordinates;
    std::string perturbed;
    std::vector<TropicalValue> point;
    std::vector<UltraStep> steps;
    std::optional<std::size_t> first_nd;
    std::optional<std::size_t> confined_at;
    std::string verdict;
    std::vector<std::string> notes;

    bool confined() const { return !first_nd || confined_at.has_value(); }
};

/// One-sided derivatives of every iterate with respect to the perturbed
/// coordinate. Confinement step: the least n >= first non-differentiable step
/// at which every state coordinate is differentiable.
UltraConfinementReport differentiability_report(const TropicalMap& m, const std::vector<TropicalValue>& point,
                                                const TropEnv& params, std::size_t perturbed, std::size_t steps);

}  // namespace udc
