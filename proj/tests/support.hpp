#pragma once

#include <random>
#include <string>
#include <vector>

#include "udc/mapdsl.hpp"
#include "udc/maxplus.hpp"
#include "udc/rational.hpp"

namespace testing {

using udc::Rational;

inline Rational random_rational(std::mt19937& rng, long lo = -10, long hi = 10, long max_den = 6) {
    std::uniform_int_distribution<long> den(1, max_den);
    long d = den(rng);
    std::uniform_int_distribution<long> num(lo * d, hi * d);
    return udc::make_rational(num(rng), d);
}

inline udc::TropicalValue random_tropical(std::mt19937& rng, double neg_inf_chance = 0.1) {
    std::bernoulli_distribution bottom(neg_inf_chance);
    if (bottom(rng)) return udc::TropicalValue::neg_inf();
    return udc::TropicalValue(random_rational(rng));
}

/// Random subtraction-free expression over `vars` with literal 1 only.
inline udc::Expr random_sf_expr(std::mt19937& rng, const std::vector<std::string>& vars, int depth) {
    std::uniform_int_distribution<int> pick(0, 5);
    int k = depth <= 0 ? 0 : pick(rng);
    if (k <= 1) {
        std::uniform_int_distribution<std::size_t> v(0, vars.size());
        std::size_t i = v(rng);
        return i == vars.size() ? udc::ex::lit(1) : udc::ex::var(vars[i]);
    }
    auto a = random_sf_expr(rng, vars, depth - 1);
    if (k == 5) {
        std::uniform_int_distribution<long> e(-3, 3);
        return udc::ex::pow(a, e(rng));
    }
    auto b = random_sf_expr(rng, vars, depth - 1);
    if (k == 2) return udc::ex::add(a, b);
    if (k == 3) return udc::ex::mul(a, b);
    return udc::ex::div(a, b);
}

}  // namespace testing
