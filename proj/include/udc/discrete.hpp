#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "udc/epsrat.hpp"
#include "udc/mapdsl.hpp"

namespace udc {

/// Projective value in P1 over Q: nullopt is the point at infinity.
using ProjectiveValue = std::optional<Rational>;

std::string to_string(const ProjectiveValue& v);

struct DiscreteConfinementConfig {
    std::string perturb;                  // coordinate receiving candidate + eps
    std::optional<Rational> candidate;    // nullopt: the point at infinity, modeled as 1/eps
    std::string free;                     // coordinate sampled at generic values
    std::vector<Rational> samples;        // >= 2 distinct values
    std::map<std::string, Rational, std::less<>> fixed;  // remaining state coordinates and parameters
    std::size_t steps = 8;
};

struct DiscreteStep {
    std::size_t n = 0;
    std::vector<std::vector<EpsRat>> values;            // [sample][coordinate]
    std::vector<std::vector<std::optional<long>>> orders;  // ord0, nullopt for the zero function
    std::vector<std::vector<ProjectiveValue>> limits;   // [sample][coordinate]
    bool has_infinity = false;
    bool info_retained = true;  // limits differ between at least two samples
    bool singular = false;
};

struct DiscreteConfinementReport {
    std::vector<std::string> coordinates;
    std::vector<Rational> samples;
    std::vector<DiscreteStep> steps;
    std::optional<std::size_t> entry;
    std::optional<std::size_t> confined_at;
    std::string verdict;

    bool confined() const { return !entry || confined_at.has_value(); }
};

/// Iterates the map exactly over Q(eps) from the perturbed initial condition
/// for every sample of the free coordinate and classifies each step by its
/// eps -> 0 limits. A step is singular when a limit is infinite or the limits
/// no longer depend on the free coordinate. Throws IndeterminateOrbit on an
/// identically vanishing denominator.
DiscreteConfinementReport run_discrete_confinement(const RationalMap& m, const DiscreteConfinementConfig& config);

/// Exact iteration over Q; throws IndeterminateOrbit on a zero denominator.
std::vector<std::vector<Rational>> iterate_exact(const RationalMap& m, std::vector<Rational> init,
                                                 const std::map<std::string, Rational, std::less<>>& params,
                                                 std::size_t steps);

std::vector<EpsRat> step_eps(const RationalMap& m, const std::vector<EpsRat>& state,
                             const std::map<std::string, Rational, std::less<>>& params);

/// Grid values v of `coord` for which some denominator of the first two
/// iterates vanishes when the other coordinates take `base` values.
std::vector<Rational> scan_singular_candidates(const RationalMap& m, const std::string& coord,
                                               const std::vector<Rational>& grid,
                                               const std::map<std::string, Rational, std::less<>>& base);

}  // namespace udc
