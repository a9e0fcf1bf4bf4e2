#include "udc/discrete.hpp"

#include <algorithm>
#include <set>

#include "udc/error.hpp"

namespace udc {

std::string to_string(const ProjectiveValue& v) {
    return v ? to_string(*v) : std::string("inf");
}

namespace {

using Params = std::map<std::string, Rational, std::less<>>;

struct EpsOps {
    EpsRat lit(const Rational& c) const { return EpsRat(c); }
    EpsRat add(const EpsRat& a, const EpsRat& b) const { return a + b; }
    EpsRat sub(const EpsRat& a, const EpsRat& b) const { return a - b; }
    EpsRat mul(const EpsRat& a, const EpsRat& b) const { return a * b; }
    EpsRat div(const EpsRat& a, const EpsRat& b) const { return a / b; }
    EpsRat neg(const EpsRat& a) const { return -a; }
    EpsRat pow(const EpsRat& a, long k) const { return integer_power(a, k, EpsRat(Rational(1)), *this); }
};

struct RationalOps {
    Rational lit(const Rational& c) const { return c; }
    Rational add(const Rational& a, const Rational& b) const { return a + b; }
    Rational sub(const Rational& a, const Rational& b) const { return a - b; }
    Rational mul(const Rational& a, const Rational& b) const { return a * b; }
    Rational div(const Rational& a, const Rational& b) const {
        if (sgn(b) == 0) throw Error(ErrorCode::DivisionByZeroFunction, "division by zero");
        return a / b;
    }
    Rational neg(const Rational& a) const { return -a; }
    Rational pow(const Rational& a, long k) const { return integer_power(a, k, Rational(1), *this); }
};

template <class T, class Ops>
std::vector<T> step_with(const RationalMap& m, const std::vector<T>& state, const Params& params, const Ops& ops) {
    auto lookup = [&](const std::string& name) -> T {
        if (auto i = m.index_of(name)) return state[*i];
        auto it = params.find(name);
        if (it == params.end()) throw Error(ErrorCode::UnboundVariable, "no value for parameter '" + name + "'");
        return T(it->second);
    };
    std::vector<T> next;
    next.reserve(m.updates.size());
    for (const auto& u : m.updates) next.push_back(evaluate<T>(u, lookup, ops));
    return next;
}

}  // namespace

std::vector<EpsRat> step_eps(const RationalMap& m, const std::vector<EpsRat>& state, const Params& params) {
    return step_with(m, state, params, EpsOps{});
}

std::vector<std::vector<Rational>> iterate_exact(const RationalMap& m, std::vector<Rational> init, const Params& params,
                                                 std::size_t steps) {
    std::vector<std::vector<Rational>> out{std::move(init)};
    for (std::size_t n = 0; n < steps; ++n) {
        try {
            out.push_back(step_with(m, out.back(), params, RationalOps{}));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DivisionByZeroFunction) throw;
            throw Error(ErrorCode::IndeterminateOrbit, "zero denominator at step " + std::to_string(n + 1));
        }
    }
    return out;
}

DiscreteConfinementReport run_discrete_confinement(const RationalMap& m, const DiscreteConfinementConfig& config) {
    auto perturbed = m.index_of(config.perturb);
    auto free = m.index_of(config.free);
    if (!perturbed) throw Error(ErrorCode::UndeclaredName, "unknown perturbed coordinate '" + config.perturb + "'");
    if (!free) throw Error(ErrorCode::UndeclaredName, "unknown free coordinate '" + config.free + "'");
    if (*perturbed == *free) throw Error(ErrorCode::InvalidArgument, "perturbed and free coordinates coincide");
    if (config.samples.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples of the free coordinate");
    if (std::set<Rational>(config.samples.begin(), config.samples.end()).size() != config.samples.size())
        throw Error(ErrorCode::InvalidArgument, "samples must be pairwise distinct");

    Params params;
    for (const auto& p : m.params) {
        auto it = config.fixed.find(p.name);
        if (it == config.fixed.end()) throw Error(ErrorCode::UnboundVariable, "no value for parameter '" + p.name + "'");
        params.emplace(p.name, it->second);
    }

    DiscreteConfinementReport report;
    report.coordinates = m.state;
    report.samples = config.samples;

    std::vector<std::vector<EpsRat>> states;
    for (const auto& sample : config.samples) {
        std::vector<EpsRat> s(m.state.size());
        for (std::size_t i = 0; i < m.state.size(); ++i) {
            if (i == *free) {
                s[i] = EpsRat(sample);
            } else if (i == *perturbed) {
                s[i] = config.candidate ? EpsRat(*config.candidate) + EpsRat::eps() : EpsRat(1) / EpsRat::eps();
            } else {
                auto it = config.fixed.find(m.state[i]);
                if (it == config.fixed.end())
                    throw Error(ErrorCode::UnboundVariable, "no value for coordinate '" + m.state[i] + "'");
                s[i] = EpsRat(it->second);
            }
        }
        states.push_back(std::move(s));
    }

    for (std::size_t n = 0;; ++n) {
        DiscreteStep st;
        st.n = n;
        st.values = states;
        for (const auto& s : states) {
            std::vector<std::optional<long>> ords;
            std::vector<ProjectiveValue> lims;
            for (const auto& v : s) {
                ords.push_back(v.is_zero() ? std::nullopt : std::optional<long>(ord0(v)));
                lims.push_back(limit0(v));
                if (!lims.back()) st.has_infinity = true;
            }
            st.orders.push_back(std::move(ords));
            st.limits.push_back(std::move(lims));
        }
        st.info_retained = std::any_of(st.limits.begin() + 1, st.limits.end(),
                                       [&](const auto& l) { return l != st.limits.front(); });
        st.singular = st.has_infinity || !st.info_retained;
        if (st.singular && !report.entry) report.entry = n;
        if (!st.singular && report.entry && !report.confined_at) report.confined_at = n;
        report.steps.push_back(std::move(st));

        if (n == config.steps || report.confined_at) break;
        for (auto& s : states) {
            try {
                s = step_eps(m, s, params);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::DivisionByZeroFunction) throw;
                throw Error(ErrorCode::IndeterminateOrbit,
                            "denominator vanishes identically at step " + std::to_string(n + 1) +
                                " (samples not generic, or exact 0/0)");
            }
        }
    }

    if (!report.entry)
        report.verdict = "no singular step within " + std::to_string(config.steps);
    else if (report.confined_at)
        report.verdict = "confined at " + std::to_string(*report.confined_at);
    else
        report.verdict = "not confined within " + std::to_string(config.steps);
    return report;
}

std::vector<Rational> scan_singular_candidates(const RationalMap& m, const std::string& coord,
                                               const std::vector<Rational>& grid, const Params& base) {
    auto idx = m.index_of(coord);
    if (!idx) throw Error(ErrorCode::UndeclaredName, "unknown coordinate '" + coord + "'");
    Params params;
    for (const auto& p : m.params)
        if (auto it = base.find(p.name); it != base.end()) params.emplace(p.name, it->second);

    std::vector<Rational> hits;
    for (const auto& v : grid) {
        std::vector<Rational> s(m.state.size());
        for (std::size_t i = 0; i < m.state.size(); ++i) {
            if (i == *idx) {
                s[i] = v;
                continue;
            }
            auto it = base.find(m.state[i]);
            if (it == base.end()) throw Error(ErrorCode::UnboundVariable, "no value for coordinate '" + m.state[i] + "'");
            s[i] = it->second;
        }
        try {
            iterate_exact(m, s, params, 2);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::IndeterminateOrbit) throw;
            hits.push_back(v);
        }
    }
    return hits;
}

}  // namespace udc
