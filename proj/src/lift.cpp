#include "udc/lift.hpp"

namespace udc {

namespace {

struct SeriesOps {
    Rational depth;
    PuiseuxSeries lit(const Rational& c) const { return PuiseuxSeries::constant(c); }
    PuiseuxSeries add(const PuiseuxSeries& a, const PuiseuxSeries& b) const { return ps_truncate(ps_add(a, b), depth); }
    PuiseuxSeries sub(const PuiseuxSeries& a, const PuiseuxSeries& b) const { return ps_truncate(ps_sub(a, b), depth); }
    PuiseuxSeries mul(const PuiseuxSeries& a, const PuiseuxSeries& b) const { return ps_truncate(ps_mul(a, b), depth); }
    PuiseuxSeries div(const PuiseuxSeries& a, const PuiseuxSeries& b) const {
        return ps_truncate(ps_mul(a, ps_inv(b, depth)), depth);
    }
    PuiseuxSeries neg(const PuiseuxSeries& a) const { return ps_neg(a); }
    PuiseuxSeries pow(const PuiseuxSeries& a, long k) const { return ps_pow(a, k, depth); }
};

}  // namespace

PuiseuxSeries to_series(const LiftSpec& spec) {
    if (const auto* m = std::get_if<Monomial>(&spec)) {
        if (sgn(m->coeff) == 0)
            throw Error(ErrorCode::ZeroAssignment, "monomial lift with coefficient 0; assign the zero series explicitly");
        return PuiseuxSeries::monomial(m->coeff, m->exponent);
    }
    return std::get<PuiseuxSeries>(spec);
}

LiftedMap::LiftedMap(RationalMap map, std::map<std::string, PuiseuxSeries, std::less<>> params, Rational depth)
    : map_(std::move(map)), params_(std::move(params)), depth_(std::move(depth)) {
    if (sgn(depth_) <= 0) throw Error(ErrorCode::InvalidArgument, "window depth must be positive");
}

PuiseuxSeries LiftedMap::evaluate(const Expr& e, const std::vector<PuiseuxSeries>& state) const {
    auto lookup = [&](const std::string& name) -> PuiseuxSeries {
        if (auto i = map_.index_of(name)) return state[*i];
        auto it = params_.find(name);
        if (it == params_.end()) throw Error(ErrorCode::UnboundVariable, "'" + name + "' has no lifted value");
        return it->second;
    };
    return udc::evaluate<PuiseuxSeries>(e, lookup, SeriesOps{depth_});
}

std::vector<PuiseuxSeries> LiftedMap::step(const std::vector<PuiseuxSeries>& state) const {
    std::vector<PuiseuxSeries> next;
    next.reserve(map_.updates.size());
    for (const auto& u : map_.updates) next.push_back(evaluate(u, state));
    return next;
}

LiftResult lift(const RationalMap& m, const std::map<std::string, LiftSpec, std::less<>>& assign, Rational depth) {
    auto find = [&](const std::string& a, const std::string& b) -> const LiftSpec* {
        if (auto it = assign.find(a); it != assign.end()) return &it->second;
        if (auto it = assign.find(b); it != assign.end()) return &it->second;
        return nullptr;
    };

    std::map<std::string, PuiseuxSeries, std::less<>> params;
    for (const auto& p : m.params) {
        const LiftSpec* spec = find(p.name, p.alias);
        if (!spec) throw Error(ErrorCode::UnboundVariable, "no lift for parameter '" + p.name + "'");
        params.emplace(p.name, to_series(*spec));
    }
    std::vector<PuiseuxSeries> initial;
    for (const auto& s : m.state) {
        const LiftSpec* spec = find(s, tropical_name(s));
        if (!spec) throw Error(ErrorCode::UnboundVariable, "no lift for state variable '" + s + "'");
        initial.push_back(to_series(*spec));
    }
    return LiftResult{LiftedMap(m, std::move(params), std::move(depth)), std::move(initial)};
}

PuiseuxSeries evaluate_series(const Expr& e, const std::map<std::string, PuiseuxSeries, std::less<>>& env,
                              const Rational& depth) {
    auto lookup = [&](const std::string& name) -> PuiseuxSeries {
        auto it = env.find(name);
        if (it == env.end()) throw Error(ErrorCode::UnboundVariable, "'" + name + "' is not bound");
        return it->second;
    };
    return evaluate<PuiseuxSeries>(e, lookup, SeriesOps{depth});
}

}  // namespace udc
